"""Exact computations with Sullivan minimal models: Gottlieb elements, derivation homology, basis changes."""

from .algebra import Element, Generator, parse_expression
from .basis_change import combined_change, even_change, indecomposable_extraction, is_terminal, odd_change
from .derivation_homology import bracket_on_homology, compute_homology, realization_probe, zero_divisor_check
from .derivations import Derivation, bracket, differential_D, exp_locally_nilpotent, split_relative
from .formats import load_model, parse_derivation, parse_model, serialize_model
from .gottlieb import check_2N_monomial, find_gottlieb, halperin_split, lemma_w1_check
from .model import SullivanModel, attach_square_killers, check_bigrading, cohomology, validate_model

__version__ = "0.1.0"
