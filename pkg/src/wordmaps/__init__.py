"""Exact word-map probabilities, varied coset word maps and solvable-group badness checks."""

from .catalog import named
from .corpus import data_path, ingest, load_group_file
from .errors import (ContractError, HypothesisError, InternalConsistencyError, ParseError,
                     ResourceLimitError, SchemaError, WordMapError)
from .groups import FiniteGroup, Subgroup, from_generators, from_table
from .probability import (ExactProbability, SampledProbability, coset_probability, decomposition_check,
                          reduction_check, sample_probability, word_probability)
from .solvable import analyze, gamma_recursion_check, reduce_to_minimal_verbal
from .survey import SurveyRow, survey
from .vsmb import check_word
from .words import Word, named_word, parse

__version__ = "0.1.0"
