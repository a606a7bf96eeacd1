"""Mine frequent serial episodes and screen free-riders with dual-partition null models."""

from .automaton import EpisodeAutomaton, Window, minimal_occurrences
from .core import Alphabet, Episode, EventSequence, is_subepisode, parse_sequence, prefix, serialize_sequence
from .edp import (DualPartition, GenerativeModel, ScreeningRecord, enumerate_partitions, exp_sup,
                  expected_support_exact, expected_support_mc, screen)
from .evaluate import compare_methods, precision_at_k
from .miner import mine_frequent, top_k_by_support
from .synth import SynConfig, generate_syn, ground_truth

__version__ = "0.1.0"
