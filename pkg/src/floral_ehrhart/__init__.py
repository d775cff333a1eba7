"""Class-refined Ehrhart theory for generic integral orthotopes."""

from .ehrhart_engine import (
    class_ehrhart,
    euler_characteristic,
    euler_vector,
    multivariable_ehrhart,
    reciprocity_check,
    special_valuations,
    total_ehrhart,
    verify_main_theorem,
)
from .floral_algebra import D, Dyadic, FloralVector, h, h_inverse
from .lattice_oracle import direct_census, verify_against_formula
from .orthotope_model import VoxelSet, classify, load, random_generic, read_file
from .sp_core import build_class_table, encode, enumerate_classes, parse, recognize

__version__ = "0.1.0"

__all__ = [
    "D",
    "Dyadic",
    "FloralVector",
    "VoxelSet",
    "build_class_table",
    "class_ehrhart",
    "classify",
    "direct_census",
    "encode",
    "enumerate_classes",
    "euler_characteristic",
    "euler_vector",
    "h",
    "h_inverse",
    "load",
    "multivariable_ehrhart",
    "parse",
    "random_generic",
    "read_file",
    "recognize",
    "reciprocity_check",
    "special_valuations",
    "total_ehrhart",
    "verify_against_formula",
    "verify_main_theorem",
]
