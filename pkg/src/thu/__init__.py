"""A proof-checking kernel for the lambda-Pi calculus modulo rewriting, with the
theory U built in and a classifier that finds the smallest named sub-theory a
proof lives in."""

from .catalog import CATALOG, subtheory, theory_u, verify_catalog
from .errors import KernelError
from .fragments import classify, fragment_closure, is_fragment, recheck_in_fragment
from .kernel import check, check_rule_preservation, infer
from .rewrite import check_orthogonality, convertible, normalize, step
from .signature import Context, RewriteRule, Theory
from .syntax import format_term, parse, parse_term

__all__ = [
    "CATALOG",
    "Context",
    "KernelError",
    "RewriteRule",
    "Theory",
    "check",
    "check_orthogonality",
    "check_rule_preservation",
    "classify",
    "convertible",
    "format_term",
    "fragment_closure",
    "infer",
    "is_fragment",
    "normalize",
    "parse",
    "parse_term",
    "recheck_in_fragment",
    "step",
    "subtheory",
    "theory_u",
    "verify_catalog",
]
