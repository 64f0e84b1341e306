"""Allow ``python -m divcam`` as an alias for the ``localize`` script."""

from .cli import entrypoint

entrypoint()
