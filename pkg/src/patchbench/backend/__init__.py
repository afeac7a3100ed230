from .base import (
    PROTOCOL_HEADER,
    PROTOCOL_VERSION,
    Backend,
    BackendError,
    TransportError,
    ValidationError,
    validate_job,
)
from .localserver import ProtocolServer
from .params import (
    GenerationParams,
    GenerationResult,
    ParamError,
    RepairJob,
    TuneParams,
)
from .remote import RemoteBackend
from .stub import StubBackend, stub_backend

__all__ = [
    "PROTOCOL_HEADER",
    "PROTOCOL_VERSION",
    "Backend",
    "BackendError",
    "GenerationParams",
    "GenerationResult",
    "ParamError",
    "ProtocolServer",
    "RemoteBackend",
    "RepairJob",
    "StubBackend",
    "TransportError",
    "TuneParams",
    "ValidationError",
    "stub_backend",
    "validate_job",
]
