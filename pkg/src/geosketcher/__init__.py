"""Layered 3D geological models from sketched topographic and geological maps."""

from .errors import (
    BaseAboveTerrainError,
    DanglingReferenceError,
    EmptyConstraintsError,
    GeosketcherError,
    MissingCoverUnitError,
    NoValueAnchorError,
    SchemaError,
    SingularSystemError,
    SketchSyntaxError,
    UnknownUnitError,
)
from .geometry import Bounds, Point2, Polyline
from .geomodel import (
    HorizonField,
    LayeredModel,
    assemble_model,
    build_horizon,
    default_model_base,
    dip_gradient,
    validate_model,
)
from .hbrbf import (
    Constraint,
    ConstraintKind,
    HbrbfConfig,
    HbrbfInterpolant,
    Kernel,
    assemble_system,
    dedup_constraints,
    fit,
)
from .mesh import TriMesh, heightfield_to_mesh, model_to_meshes, obj_bytes, write_obj
from .pipeline import BuildRequest, BuildResult, run_build
from .sketch import (
    BoundaryLine,
    ContourLine,
    Diagnostic,
    DipSymbol,
    HorizonKind,
    HorizonSpec,
    MapSketch,
    RelationAnnotation,
    RelationKind,
    RockUnit,
    Severity,
    parse_sketch,
    serialize_sketch,
    validate_sketch,
)
from .stratigraphy import (
    AgeEdge,
    AgeOrder,
    CycleDiagnostic,
    EdgeProvenance,
    StratGraph,
    build_graph,
    horizon_age_order,
    make_graph,
    relative_ages,
)
from .terrain import (
    GridSpec,
    Heightfield,
    TerrainField,
    build_terrain,
    default_spacing,
    rasterize,
    resample_polyline,
)

__version__ = "0.1.0"

__all__ = [
    "AgeEdge",
    "AgeOrder",
    "BaseAboveTerrainError",
    "Bounds",
    "BoundaryLine",
    "BuildRequest",
    "BuildResult",
    "Constraint",
    "ConstraintKind",
    "ContourLine",
    "CycleDiagnostic",
    "DanglingReferenceError",
    "Diagnostic",
    "DipSymbol",
    "EdgeProvenance",
    "EmptyConstraintsError",
    "GeosketcherError",
    "GridSpec",
    "HbrbfConfig",
    "HbrbfInterpolant",
    "Heightfield",
    "HorizonField",
    "HorizonKind",
    "HorizonSpec",
    "Kernel",
    "LayeredModel",
    "MapSketch",
    "MissingCoverUnitError",
    "NoValueAnchorError",
    "Point2",
    "Polyline",
    "RelationAnnotation",
    "RelationKind",
    "RockUnit",
    "SchemaError",
    "Severity",
    "SingularSystemError",
    "SketchSyntaxError",
    "StratGraph",
    "TerrainField",
    "TriMesh",
    "UnknownUnitError",
    "assemble_model",
    "assemble_system",
    "build_graph",
    "build_horizon",
    "build_terrain",
    "dedup_constraints",
    "default_model_base",
    "default_spacing",
    "dip_gradient",
    "fit",
    "heightfield_to_mesh",
    "horizon_age_order",
    "make_graph",
    "model_to_meshes",
    "obj_bytes",
    "parse_sketch",
    "rasterize",
    "relative_ages",
    "resample_polyline",
    "run_build",
    "serialize_sketch",
    "validate_model",
    "validate_sketch",
    "write_obj",
]
