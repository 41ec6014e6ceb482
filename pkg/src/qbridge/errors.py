"""Exception hierarchy shared by every pipeline stage."""

from __future__ import annotations


class QBridgeError(Exception):
    """Base class; `stage` names the pipeline stage that raised it."""

    stage = "GENERIC"


# problem model / ingest
class IngestError(QBridgeError):
    stage = "INGEST"


class TagDataMismatch(IngestError):
    pass


class MalformedGraph(IngestError):
    pass


class OperandOverflow(IngestError):
    pass


class JsonSyntaxError(IngestError):
    pass


class UnknownProblemType(IngestError):
    pass


class MissingDataField(IngestError):
    pass


class ExtractionFailed(IngestError):
    pass


# qcf
class QcfError(QBridgeError):
    stage = "QCF"


class UnsupportedTag(QcfError):
    pass


class LengthMismatch(QcfError):
    pass


class NonSpinValue(QcfError):
    pass


# circuit / generator
class GenerateError(QBridgeError):
    stage = "GENERATE"


class InvalidGate(GenerateError):
    pass


class UnboundParameter(GenerateError):
    pass


class ContainsMeasurement(GenerateError):
    pass


class TooManyVariables(GenerateError):
    pass


class WidthMismatch(GenerateError):
    pass


class SearchExhausted(QBridgeError):
    stage = "EXECUTE"


# simulator
class TooManyQubits(QBridgeError):
    stage = "EXECUTE"


# transpiler
class TranspileError(QBridgeError):
    stage = "TRANSPILE"


class UnsupportedBasis(TranspileError):
    pass


class CircuitTooLarge(TranspileError):
    pass


# devices / recommender
class SchemaError(QBridgeError):
    stage = "RECOMMEND"

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class NoCompatiblePair(QBridgeError):
    stage = "RECOMMEND"

    def __init__(self, reasons: list[str]):
        msg = "no feasible circuit-device pair"
        if reasons:
            msg += ":\n  " + "\n  ".join(reasons)
        super().__init__(msg)
        self.reasons = list(reasons)


# decoder
class DecodeError(QBridgeError):
    stage = "DECODE"


class NoFeasibleOutcome(DecodeError):
    pass


class TooLarge(DecodeError):
    pass
