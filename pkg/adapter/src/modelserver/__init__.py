"""Seq2seq model server speaking the generation wire protocol."""

from .app import create_app
from .model import AdapterConfig, echo_model, load_seq2seq

__version__ = "0.1.0"
