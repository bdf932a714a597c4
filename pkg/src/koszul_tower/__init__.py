"""Exact Koszul complexes, Tor groups and the I-adic tower over graded polynomial rings."""

from .config import ConfigError, RunConfig, parse_config, render
from .exterior import ExteriorElement, TensorElement, coproduct, koszul_diff, tensor_diff, wedge
from .linalg import (BaseRing, ExactMatrix, ModuleInvariants, homology, kernel_basis,
                     smith_normal_form, solve_in_image, subquotient_homology)
from .model import model_differential, verify_colinearity, verify_model_exactness
from .modules import (GradedModule, ModuleMorphism, ShortExactSequence, build_ses, check_singular,
                      filtration_quotient, ideal_power)
from .polyring import Polynomial, PolyRing, RingContext, check_regular_sequence
from .report import CheckReport
from .suite import Bounds, Certificate, CheckId, run_all, run_check
from .tor import (TorClass, TorGroup, connecting_hom, induced_map, tor, tor_product,
                  verify_leibniz)

__version__ = "0.1.0"

__all__ = [
    "BaseRing", "ExactMatrix", "ModuleInvariants", "homology", "kernel_basis",
    "smith_normal_form", "solve_in_image", "subquotient_homology",
    "PolyRing", "Polynomial", "RingContext", "check_regular_sequence",
    "ExteriorElement", "TensorElement", "wedge", "koszul_diff", "coproduct", "tensor_diff",
    "GradedModule", "ModuleMorphism", "ShortExactSequence", "ideal_power",
    "filtration_quotient", "build_ses", "check_singular",
    "TorGroup", "TorClass", "tor", "connecting_hom", "induced_map", "tor_product",
    "verify_leibniz",
    "model_differential", "verify_model_exactness", "verify_colinearity",
    "CheckId", "Certificate", "Bounds", "run_all", "run_check", "CheckReport",
    "RunConfig", "ConfigError", "parse_config", "render",
]
