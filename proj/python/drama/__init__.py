"""Simulated content-addressable search in commodity DRAM."""

from ._drama import (
    CamArray,
    CamMode,
    Classifier,
    Command,
    DeviceConfig,
    DramaError,
    KmerDatabase,
    SearchKind,
    SequenceRecord,
    SimConfig,
    Subarray,
    TimingModel,
    account,
    emit_trace,
    encode,
    ingest,
    kmerize,
    parse_trace,
    synthetic_reference,
    throughput_estimate,
)

__all__ = [
    "CamArray",
    "CamMode",
    "Classifier",
    "Command",
    "DeviceConfig",
    "DramaError",
    "KmerDatabase",
    "SearchKind",
    "SequenceRecord",
    "SimConfig",
    "Subarray",
    "TimingModel",
    "account",
    "emit_trace",
    "encode",
    "ingest",
    "kmerize",
    "parse_trace",
    "synthetic_reference",
    "throughput_estimate",
]
