"""Compression-based search toolkit for Legendre pairs."""

from .seqcore import (
    PsdExact,
    SequenceError,
    VerificationReport,
    compress,
    normalize_pm_one,
    paf,
    paf_vector,
    psd,
    psd_at_m_exact,
    verify_legendre_pair,
)

__version__ = "0.1.0"

__all__ = [
    "PsdExact",
    "SequenceError",
    "VerificationReport",
    "compress",
    "normalize_pm_one",
    "paf",
    "paf_vector",
    "psd",
    "psd_at_m_exact",
    "verify_legendre_pair",
    "__version__",
]
