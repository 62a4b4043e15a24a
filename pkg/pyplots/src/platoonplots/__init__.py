"""Figure scripts for the tables written by the platoonsim command line.

The package never recomputes dynamics: it parses the documented CSV/YAML
formats, validates their schemas, and renders matplotlib figures from the
values as written.
"""

__version__ = "0.1.0"

from .io import SchemaError  # noqa: F401
