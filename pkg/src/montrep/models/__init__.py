from montrep.models.link import MontesinosSpec
from montrep.models.output import ComponentsOutput, ScanOutput, TangleEndsOutput, VerifyOutput
from montrep.models.representation import (
    ClassParams,
    EnumerationResult,
    LinkInfo,
    RepClass,
    RepMatrices,
    RunReport,
    ScanMinimum,
    ScanResult,
    VerificationReport,
)

__all__ = [
    "ClassParams",
    "ComponentsOutput",
    "EnumerationResult",
    "LinkInfo",
    "MontesinosSpec",
    "RepClass",
    "RepMatrices",
    "RunReport",
    "ScanMinimum",
    "ScanOutput",
    "ScanResult",
    "TangleEndsOutput",
    "VerificationReport",
    "VerifyOutput",
]
