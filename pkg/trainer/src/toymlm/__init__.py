"""Toy masked-LM trainer for the two-phase unlikelihood + distillation recipe."""

from .data import Example, load_dataset, load_manifest
from .model import ToyMLM
from .probe import probe, write_predictions
from .training import finetune, pretrain, snapshot_teacher
from .vocab import Vocab

__version__ = "0.1.0"
