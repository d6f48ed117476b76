"""Cover calculus, order reduction and certified embeddings of finite metric samples."""

from ._core import (
    CertificateError,
    Cover,
    EmbeddingResult,
    Error,
    GeneralPositionError,
    InputError,
    OracleError,
    PreconditionError,
    Space,
    __version__,
    affine_distance,
    closed_shrinking,
    embed,
    general_position,
    hyperplanes,
    is_point_star_refinement,
    is_refinement,
    is_star_refinement,
    kappa_map,
    meet,
    nerve,
    nerve_json,
    open_image,
    order_of,
    reduce_order,
    star_refinement,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
