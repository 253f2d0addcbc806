"""Linearized shallow networks: fixed hidden parameters, solved output layer."""

from .activations import Activation, NeuronSet, relu_power, tanh
from .estimators import (
    EllipticCollocationSolver,
    GalerkinEllipticSolver,
    LinearizedNetworkRegressor,
    NeuronFeatures,
)
from .pointsets import HiddenParams, Provenance, RngSpec, generate
from .quadrature import QuadratureRule, gauss_legendre, piecewise_tensor_rule, qmc_rule
from .targets import ProdSinHalfPi, SinM, SumSinM, parse_target

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "NeuronSet",
    "relu_power",
    "tanh",
    "EllipticCollocationSolver",
    "GalerkinEllipticSolver",
    "LinearizedNetworkRegressor",
    "NeuronFeatures",
    "HiddenParams",
    "Provenance",
    "RngSpec",
    "generate",
    "QuadratureRule",
    "gauss_legendre",
    "piecewise_tensor_rule",
    "qmc_rule",
    "ProdSinHalfPi",
    "SinM",
    "SumSinM",
    "parse_target",
]
