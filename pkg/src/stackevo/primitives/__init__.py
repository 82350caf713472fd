from stackevo.primitives.catalog import (
    NodeSpec,
    PrimitiveSpec,
    TrainedPrimitive,
    catalog,
    catalog_names,
    fit,
    fit_arrays,
    get_spec,
    predict,
    register,
)

__all__ = [
    "NodeSpec",
    "PrimitiveSpec",
    "TrainedPrimitive",
    "catalog",
    "catalog_names",
    "fit",
    "fit_arrays",
    "get_spec",
    "predict",
    "register",
]
