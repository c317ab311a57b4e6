"""Error type shared by all solver modules."""


class SolverError(RuntimeError):
    """Numerical failure with a stable, machine-readable code.

    The ``code`` attribute (e.g. ``"tsylv-near-singular"``) is what the CLI
    prints and what callers should dispatch on; the message carries detail.
    """

    def __init__(self, code, message=""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)
