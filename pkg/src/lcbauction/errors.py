class SamplingError(RuntimeError):
    """Rejection sampling exhausted its proposal budget."""
