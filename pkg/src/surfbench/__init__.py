"""surfbench: rotation systems, current graphs, surgery, and genus certification."""

from .graphs import (
    Graph,
    GraphError,
    build_circulant,
    build_complete,
    build_complete_on,
    build_ham_complement,
    build_octahedral,
    closed_form_bound,
    euler_lower_bound,
    join_with_empty,
    remove_edges,
)
from .embedding import (
    Embedding,
    EmbeddingError,
    Face,
    FaceSet,
    ShapeReport,
    SurfaceClass,
    check_shape,
    classify_surface,
    embedding_from_rows,
    euler_characteristic,
    graph_identity,
    reflect_vertex,
    rows_of,
    trace_faces,
)

__version__ = "0.1.0"
