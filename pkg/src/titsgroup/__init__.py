"""Tits groups of extended affine Weyl groups, descent for inner twists and Hecke presentations."""
from .kernels import BACKEND
from .root_datum import RootDatum, RootDatumError, WeylElt, build_root_datum
from .iwahori_weyl import ExtAffElt, omega_group
from .affine_tits import TitsElt, cross_section, verify_coxeter
from .descent import build_frobenius, relative_tits_check, stable_cross_section
from .hecke import HeckeAlgebra, emit_presentation
from .descriptor import GroupDescriptor, parse_descriptor, serialize

__version__ = "0.1.0"

__all__ = ["BACKEND", "RootDatum", "RootDatumError", "WeylElt", "build_root_datum", "ExtAffElt",
           "omega_group", "TitsElt", "cross_section", "verify_coxeter", "build_frobenius",
           "relative_tits_check", "stable_cross_section", "HeckeAlgebra", "emit_presentation",
           "GroupDescriptor", "parse_descriptor", "serialize"]
