"""Detect and verify generalized torsion in finitely presented groups.

A generalized torsion element is a nontrivial element some product of
whose conjugates is the identity.  The package bundles free-group words,
group presentations with a knot catalog, a tri-state word-problem oracle,
replayable torsion certificates with a verifier and a search, and Alexander
polynomial tools for the root-based bi-orderability criteria.
"""

from .alexander import (
    LaurentPolynomial,
    alexander_polynomial,
    orderability_report,
    parse_polynomial,
    positive_real_roots,
)
from .presentations import (
    CATALOG_NAMES,
    Presentation,
    abelianization,
    catalog,
    connected_sum,
    load_presentation,
    parse_presentation,
    torus_group,
)
from .search import NotFound, SearchBounds, candidate_bases, search, search_auto
from .torsion import (
    TorsionCertificate,
    builtin_certificates,
    commuting_powers_certificate,
    expand_commutator,
    transport,
    verify,
)
from .word_problem import Budget, TriState, is_trivial
from .words import Word, commutator, conjugate, parse_word

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "CATALOG_NAMES",
    "LaurentPolynomial",
    "NotFound",
    "Presentation",
    "SearchBounds",
    "TorsionCertificate",
    "TriState",
    "Word",
    "abelianization",
    "alexander_polynomial",
    "builtin_certificates",
    "candidate_bases",
    "catalog",
    "commutator",
    "commuting_powers_certificate",
    "conjugate",
    "connected_sum",
    "expand_commutator",
    "is_trivial",
    "load_presentation",
    "orderability_report",
    "parse_polynomial",
    "parse_presentation",
    "parse_word",
    "positive_real_roots",
    "search",
    "search_auto",
    "torus_group",
    "transport",
    "verify",
]
