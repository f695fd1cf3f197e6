"""Graded polynomial identities and codimensions of the infinite-dimensional
Grassmann algebra over a finite field, with the four homogeneous Z2-gradings
(canonical, infinity, k*, k) made executable and checkable."""

from __future__ import annotations

from .codim import (MultifreeBasis, codim_report, exact_codim, formula_ledger,
                    independence_certificate, multifree_basis, oracle_bidegree, oracle_dim,
                    w_bounds)
from .counting import (CountParams, c_circ, c_family, c_star, kappa, kappa_bruteforce,
                       u_dim_bound)
from .freealg import FreePolynomial, Multidegree, Variable, commutator, evaluate, parse, y, z
from .gf import FieldElement, FieldSpec, make_field
from .grassmann import (Canonical, GradingSpec, GrassmannElement, Infinity, K, KStar, gmul,
                        parse_grading)
from .identities import IdentityBasis, identity_basis, verify
from .oracle import RankCertificate
from .rewrite import NormalForm, normal_form, residual_check
from .structure import PPolyMonomial, PrTerm, enumerate_family, is_member

__version__ = "0.1.0"

__all__ = [
    "MultifreeBasis", "codim_report", "exact_codim", "formula_ledger",
    "independence_certificate", "multifree_basis", "oracle_bidegree", "oracle_dim", "w_bounds",
    "CountParams", "c_circ", "c_family", "c_star", "kappa", "kappa_bruteforce", "u_dim_bound",
    "FreePolynomial", "Multidegree", "Variable", "commutator", "evaluate", "parse", "y", "z",
    "FieldElement", "FieldSpec", "make_field",
    "Canonical", "GradingSpec", "GrassmannElement", "Infinity", "K", "KStar", "gmul",
    "parse_grading",
    "IdentityBasis", "identity_basis", "verify",
    "RankCertificate",
    "NormalForm", "normal_form", "residual_check",
    "PPolyMonomial", "PrTerm", "enumerate_family", "is_member",
]
