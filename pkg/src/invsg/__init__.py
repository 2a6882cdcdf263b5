"""Exact computations with finite inverse semigroups and their groupoids."""
from .core import InvSemigroup, verify, load, from_dict, predicates
from .generators import generate, corpus
from .errors import InvsgError

__all__ = ["InvSemigroup", "verify", "load", "from_dict", "predicates", "generate",
           "corpus", "InvsgError"]
