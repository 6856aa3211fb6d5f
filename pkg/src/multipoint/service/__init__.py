"""HTTP service subpackage; run with ``python -m multipoint.service``."""
