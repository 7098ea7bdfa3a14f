"""Shared exception and warning types."""


class ValidationError(ValueError):
    """Malformed input data: tracks, manifests, schemas, or config combinations."""


class AudioFormatError(ValueError):
    """WAV payload the toolkit does not accept."""


class ClippingWarning(UserWarning):
    """Samples were clipped while quantizing to 16-bit PCM."""
