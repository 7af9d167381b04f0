"""Exact, certificate-backed computations for a reflexive sequence space on
which the spread ``e_i -> e_{2i}`` is an isometry onto an uncomplemented
subspace.
"""
from .certificates import Terminal, Weighted, evaluate_certificate, flatten, verify_certificate_structure
from .engine import NormBracket, gm_norm_bracket, gm_norm_lower, isometry_check
from .mixed_tsirelson import mt_norm_exact, mt_norm_oracle
from .norming import Caps, KContext, build_j_special, check_K1, check_K2, check_K3, generate_K
from .registry import SigmaRegistry, canonical_serialize
from .schedule import ParameterSchedule, compact, conforming, desk
from .spread import apply_R, apply_S, lambda_member
from .vectors import FinVector, Interval, pair, parse_vector

__version__ = "0.1.0"

__all__ = [
    "Caps", "FinVector", "Interval", "KContext", "NormBracket", "ParameterSchedule", "SigmaRegistry",
    "Terminal", "Weighted", "apply_R", "apply_S", "build_j_special", "canonical_serialize", "check_K1",
    "check_K2", "check_K3", "compact", "conforming", "desk", "evaluate_certificate", "flatten",
    "generate_K", "gm_norm_bracket", "gm_norm_lower", "isometry_check", "lambda_member",
    "mt_norm_exact", "mt_norm_oracle", "pair", "parse_vector", "verify_certificate_structure",
]
