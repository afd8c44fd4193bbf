"""Composition trees, fair train/test splits and a natural-logic NLI corpus
generator with a bounded finite-model oracle."""

__version__ = "0.1.0"
