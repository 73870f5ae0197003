"""Domain types shared by every pipeline stage."""

from .models import (
    AdmissibilityReport,
    AnnulusDecomposition,
    BandlimitedCandidate,
    BesselEval,
    BesselRoute,
    HolderReport,
    LogIntegralResult,
    PQPolynomials,
    RadialField,
    SampledFunction,
    SpectrumReport,
    Symmetry,
    TransformRoute,
    Units,
    Verdict,
    WeightProfile,
)

__all__ = [
    "AdmissibilityReport",
    "AnnulusDecomposition",
    "BandlimitedCandidate",
    "BesselEval",
    "BesselRoute",
    "HolderReport",
    "LogIntegralResult",
    "PQPolynomials",
    "RadialField",
    "SampledFunction",
    "SpectrumReport",
    "Symmetry",
    "TransformRoute",
    "Units",
    "Verdict",
    "WeightProfile",
]
