"""c-differential uniformity of functions over GF(p^n)."""
from .errors import CDiffError
from .field import Field, FieldElement, build_field, parse_field_spec
from .spectrum import PowerMap, TableMap, all_c_sweep, classify, full_cddt, uniformity

__all__ = [
    "CDiffError",
    "Field",
    "FieldElement",
    "PowerMap",
    "TableMap",
    "all_c_sweep",
    "build_field",
    "classify",
    "full_cddt",
    "parse_field_spec",
    "uniformity",
]
