"""presslens: collective-identity sentiment analysis over annotated newspaper corpora."""

__version__ = "0.1.0"
