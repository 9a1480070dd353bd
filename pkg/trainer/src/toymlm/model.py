"""Tiny bidirectional masked-LM encoder."""

from __future__ import annotations

import torch
from torch import nn

MAX_LEN = 48


class ToyMLM(nn.Module):
    """Two-layer transformer encoder with a language-modeling head.

    Word-level vocabulary; the distribution over the vocabulary at any masked
    position comes from a softmax over the head's logits.
    """

    def __init__(
        self,
        vocab_size: int,
        d_model: int = 64,
        n_heads: int = 4,
        n_layers: int = 2,
        d_ff: int = 128,
        max_len: int = MAX_LEN,
        dropout: float = 0.1,
    ):
        super().__init__()
        self.max_len = max_len
        self.token_embedding = nn.Embedding(vocab_size, d_model)
        self.position_embedding = nn.Embedding(max_len, d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=d_model,
            nhead=n_heads,
            dim_feedforward=d_ff,
            dropout=dropout,
            batch_first=True,
            norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            layer, num_layers=n_layers, enable_nested_tensor=False
        )
        self.norm = nn.LayerNorm(d_model)
        self.lm_head = nn.Linear(d_model, vocab_size)

    def forward(self, ids: torch.Tensor, pad_mask: torch.Tensor) -> torch.Tensor:
        """ids, pad_mask: [batch, seq]; pad_mask True at padding. Returns logits."""
        positions = torch.arange(ids.size(1), device=ids.device).unsqueeze(0)
        hidden = self.token_embedding(ids) + self.position_embedding(positions)
        hidden = self.encoder(hidden, src_key_padding_mask=pad_mask)
        return self.lm_head(self.norm(hidden))

    def logits_at(self, ids, pad_mask, positions) -> torch.Tensor:
        """Logits at one position per batch row: [batch, vocab]."""
        logits = self.forward(ids, pad_mask)
        rows = torch.arange(ids.size(0), device=ids.device)
        return logits[rows, positions]
