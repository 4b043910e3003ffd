"""Finite models of inverse quantal frames, their sheaves and bisheaves.

Groupoid quantales ``O(G) = P(G)`` of finite discrete groupoids, Hilbert
modules over them, principal and biprincipal bisheaves, and a decision
procedure for Morita equivalence that is checked against an
orbit/isotropy oracle.
"""

from .bimodule import QRBisheaf, dual, is_biprincipal, is_principal, make_bisheaf, tensor_compose
from .errors import IQFError, Inconclusive, ParseError
from .groupoid import BiAction, FinGroupoid, GAction, GroupoidFunctor, validate
from .morita import HSMap, decide_morita, hs_compose, is_hs_invertible, morita_oracle
from .qmodule import QSheaf, inner_fast, inner_oracle, module_of_action
from .quantale import GroupoidQuantale, Quantale, quantale_of_groupoid, validate_iqf
from .report import Report
from .locale import BLocale, FinLocale
from .suplat import FinSupLattice

__all__ = [
    "BLocale",
    "BiAction",
    "FinGroupoid",
    "FinLocale",
    "GAction",
    "GroupoidFunctor",
    "GroupoidQuantale",
    "HSMap",
    "IQFError",
    "Inconclusive",
    "ParseError",
    "QRBisheaf",
    "QSheaf",
    "Quantale",
    "Report",
    "FinSupLattice",
    "decide_morita",
    "dual",
    "hs_compose",
    "inner_fast",
    "inner_oracle",
    "is_biprincipal",
    "is_hs_invertible",
    "is_principal",
    "make_bisheaf",
    "module_of_action",
    "morita_oracle",
    "quantale_of_groupoid",
    "tensor_compose",
    "validate",
    "validate_iqf",
]
