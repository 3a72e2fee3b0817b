"""Primitivity checks for one-relator and link groups, and a rule engine
certifying the Baum-Connes conjecture for torsion-free extensions of them."""

from .certify import (
    CertReport, PrimitivityVerdict, Verdict, certify, certify_iterated,
    check_one_relator, full_braid,
)
from .lie import LieVector, LyndonWord, bracketing, is_proper_power, lie_coordinates, lyndon_words
from .linkdiag import LinkingDiagram, LinkVerdict, is_primitive_link, relevant_primes
from .magnus import TruncatedSeries, magnus_expand, series_mul, weight
from .words import FreeWord, Presentation, cyclic_reduce, exponent_sums, parse_presentation, reduce

__version__ = "0.1.0"
