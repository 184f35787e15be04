"""Feature Decay data selection over backtranslated corpora from several MT systems."""

__version__ = "0.1.0"

from .corpus import CandidatePair, MultiSourcePool, Sentence, load_corpus, load_pool
from .diversity import DiversityScores, mtld, ttr, yules_i
from .errors import AlignmentError, ConfigError, DataError, FactorError
from .fda import SelectionResult, fda_score, select_greedy
from .ngrams import SeedNGramSet, SelectedCounts, extract_ngrams
from .quality import corpus_bleu, corpus_chrf3, corpus_ter, evaluate
from .report import diversity_table, length_table, selection_histogram, write_report
from .rescoring import SystemFactorTable, build_factor_table, compute_phi
from .strategies import (
    StrategyConfig,
    run_each_from_all,
    run_each_from_all_x4,
    run_from_all,
    run_rescored,
)
