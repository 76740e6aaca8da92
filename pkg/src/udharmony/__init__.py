"""udharmony: detect and harmonize dependency-relation annotation
differences between CoNLL-U treebanks, with sampling and evaluation
scaffolding for low-resource parsing experiments."""

__version__ = "0.1.0"

from .conllu import Corpus, Sentence, Token, parse, parse_file, serialize, write_file
from .convert import (
    ConversionReport,
    ConverterConfig,
    Fallback,
    Strategy,
    apply_plan,
    convert_embedding,
    convert_lexical,
)
from .evaluate import compare_significance, prediction_analysis, score
from .mismatch import MismatchSet, detect, summarize
from .pairs import NormalizationPolicy, PairIndex, PairKey, build_index
from .sampling import SamplePlan, sample
from .vectors import NeighborQuery, VectorStore, load_vectors, top_k_neighbors

__all__ = [
    "Corpus",
    "Sentence",
    "Token",
    "parse",
    "parse_file",
    "serialize",
    "write_file",
    "ConversionReport",
    "ConverterConfig",
    "Fallback",
    "Strategy",
    "apply_plan",
    "convert_embedding",
    "convert_lexical",
    "compare_significance",
    "prediction_analysis",
    "score",
    "MismatchSet",
    "detect",
    "summarize",
    "NormalizationPolicy",
    "PairIndex",
    "PairKey",
    "build_index",
    "SamplePlan",
    "sample",
    "NeighborQuery",
    "VectorStore",
    "load_vectors",
    "top_k_neighbors",
]
