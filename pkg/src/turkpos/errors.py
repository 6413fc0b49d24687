"""Domain exceptions shared across the package.

Every error the library raises deliberately derives from TaggerError so the
CLI can map "domain error" to a single exit code.
"""


class TaggerError(Exception):
    """Base class for all deliberate turkpos errors."""


class EmptyCorpus(TaggerError):
    """An operation requiring labeled sentences received none."""


class TooSmall(TaggerError):
    """A corpus split would leave one side empty."""


class TooLong(TaggerError):
    """A sequence exceeds the padding target length."""


class IdOutOfRange(TaggerError):
    """A word or tag id falls outside the vocabulary bounds."""


class DimensionMismatch(TaggerError):
    """Array shapes disagree with the model's dimensions."""


class AllMasked(TaggerError):
    """A loss was requested over zero real (non-PAD) positions."""


class InvalidEpsilon(TaggerError):
    """Gradient checking needs a strictly positive step size."""


class FormatVersionMismatch(TaggerError):
    """A model file was written by an unsupported format version."""


class CorruptFile(TaggerError):
    """A model file is truncated or structurally invalid."""


class UnknownTag(TaggerError):
    """A gold tag does not exist in the model's tagset."""


class DanglingReference(TaggerError):
    """A correction points at an analysis that cannot be found."""


class InvalidSmoothing(TaggerError):
    """HMM smoothing constant must be > 0."""


class EmptySentence(TaggerError):
    """Viterbi decoding received an empty token list."""


class EmptyAfterCleaning(TaggerError):
    """No tokens survived preprocessing; nothing to tag."""


class UnsupportedFormat(TaggerError):
    """An unknown export format name was requested."""
