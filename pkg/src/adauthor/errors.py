"""Domain error hierarchy shared by the library, CLI, and HTTP service.

Every error carries a stable machine-readable ``code`` so the service can
map it to one (status, code) pair and the CLI can print it on stderr.
"""


class DomainError(Exception):
    code = "DomainError"

    def __init__(self, message="", detail=None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.detail = detail


class UnknownVideo(DomainError):
    code = "UnknownVideo"


class DuplicateName(DomainError):
    code = "DuplicateName"


class UnknownVariation(DomainError):
    code = "UnknownVariation"


class VariationHasChildren(DomainError):
    code = "VariationHasChildren"


class UnknownDescription(DomainError):
    code = "UnknownDescription"


class EmptyText(DomainError):
    code = "EmptyText"


class OutOfBounds(DomainError):
    code = "OutOfBounds"


class OrderingViolation(DomainError):
    code = "OrderingViolation"


class InvalidTagSet(DomainError):
    code = "InvalidTagSet"


class EmptyPrompt(DomainError):
    code = "EmptyPrompt"


class EmptyAudio(DomainError):
    code = "EmptyAudio"


class TooFewFrames(DomainError):
    code = "TooFewFrames"


class ProviderFailure(DomainError):
    code = "ProviderFailure"

    def __init__(self, message="", detail=None, persisted=None):
        super().__init__(message, detail)
        # ids of descriptions persisted before the failing batch
        self.persisted = persisted or []


class UnparseableResponse(DomainError):
    code = "UnparseableResponse"


class NoPendingProposal(DomainError):
    code = "NoPendingProposal"


class MalformedWebVTT(DomainError):
    code = "MalformedWebVTT"


class VersionUnsupported(DomainError):
    code = "VersionUnsupported"


class InvariantViolation(DomainError):
    code = "InvariantViolation"


class IoFailure(DomainError):
    code = "IoFailure"


class DecoderFailure(DomainError):
    code = "DecoderFailure"


class MissingMedia(DomainError):
    code = "MissingMedia"
