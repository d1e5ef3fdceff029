"""Certified counting-function bounds for Dirichlet Laplacians on rectilinear domains."""
from .spectra import Box, NoExactSpectrum, count_exact, cube, eigenvalues, interval
from .geometry import DomainMetrics, RectilinearDomain, metrics
from .certify import Certificate, certify_epsilon_polya, lambda_epsilon

__all__ = ["Box", "NoExactSpectrum", "count_exact", "cube", "eigenvalues", "interval",
           "DomainMetrics", "RectilinearDomain", "metrics",
           "Certificate", "certify_epsilon_polya", "lambda_epsilon"]
__version__ = "0.1.0"
