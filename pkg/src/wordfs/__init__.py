"""Weakly-supervised dimension reduction for pre-trained word embeddings.

Dimensions are ranked by how well their per-dimension cosine contribution
tracks human word-similarity scores, then the best ones are kept.
"""

__version__ = "0.1.0"

from wordfs.embedding_store import EmbeddingTable, load_embeddings, save_embeddings
from wordfs.errors import DomainError, ParseError, WordFSError

__all__ = [
    "EmbeddingTable",
    "load_embeddings",
    "save_embeddings",
    "DomainError",
    "ParseError",
    "WordFSError",
    "__version__",
]
