"""Wire format for a remote sampler backend, plus a loopback adapter.

A backend accepts a JSON request {"model": ..., "params": ...} and answers
{"reads": ..., "energies": ..., "elapsed": ...}; reads travel bit-packed as
base64 (row-major, spin +1 encoded as bit 1).  Transport is out of scope:
the loopback adapter exercises the full encode/decode path in process and
must reproduce the in-process backend bit for bit.

Failures are kept distinct: RemoteProtocolError for malformed traffic,
SolverError for a backend that answered with an error payload.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from .embedding import PhysicalProblem
from .models import IsingModel
from .sampler import SampleSet, SamplerParams, SimulatedAnnealer

__all__ = [
    "RemoteProtocolError",
    "SolverError",
    "encode_request",
    "decode_request",
    "encode_response",
    "decode_response",
    "LoopbackSampler",
]


class RemoteProtocolError(RuntimeError):
    """The remote payload violated the wire format."""


class SolverError(RuntimeError):
    """The remote backend reported a solver-side failure."""


def encode_request(problem: PhysicalProblem, params: SamplerParams) -> str:
    model = problem.model
    doc = {
        "model": {
            "n": model.n,
            "h": {str(i): w for i, w in sorted(model.h.items())},
            "j": [[a, b, w] for (a, b), w in sorted(model.j.items())],
            "offset": model.offset,
            "qubits": list(problem.qubits),
        },
        "params": {
            "num_reads": params.num_reads,
            "num_sweeps": params.num_sweeps,
            "beta_hot": params.beta_hot,
            "beta_cold": params.beta_cold,
            "seed": params.seed,
        },
    }
    return json.dumps(doc)


def decode_request(text: str) -> tuple[IsingModel, tuple[int, ...], SamplerParams]:
    try:
        doc = json.loads(text)
        m = doc["model"]
        model = IsingModel(
            n=int(m["n"]),
            h={int(k): float(v) for k, v in m["h"].items()},
            j={(int(a), int(b)): float(w) for a, b, w in m["j"]},
            offset=float(m.get("offset", 0.0)),
        )
        qubits = tuple(int(q) for q in m["qubits"])
        p = doc["params"]
        params = SamplerParams(
            num_reads=int(p["num_reads"]),
            num_sweeps=int(p["num_sweeps"]),
            beta_hot=float(p["beta_hot"]),
            beta_cold=float(p["beta_cold"]),
            seed=int(p["seed"]),
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise RemoteProtocolError(f"malformed request: {exc}") from exc
    return model, qubits, params


def _pack_reads(reads: np.ndarray) -> str:
    bits = (reads > 0).astype(np.uint8).reshape(-1)
    return base64.b64encode(np.packbits(bits).tobytes()).decode("ascii")


def _unpack_reads(blob: str, num_reads: int, n: int) -> np.ndarray:
    raw = np.frombuffer(base64.b64decode(blob), dtype=np.uint8)
    bits = np.unpackbits(raw)[: num_reads * n]
    if bits.shape[0] != num_reads * n:
        raise RemoteProtocolError("reads payload shorter than num_reads * n")
    return (bits.reshape(num_reads, n).astype(np.int8) * 2 - 1).astype(np.int8)


def encode_response(ss: SampleSet) -> str:
    doc = {
        "num_reads": int(ss.reads.shape[0]),
        "n": int(ss.reads.shape[1]),
        "reads": _pack_reads(ss.reads),
        "energies": [float(e) for e in ss.energies],
        "elapsed": ss.elapsed,
    }
    return json.dumps(doc)


def decode_response(text: str, params: SamplerParams, qubits: tuple[int, ...]) -> SampleSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RemoteProtocolError(f"response is not JSON: {exc}") from exc
    if "error" in doc:
        raise SolverError(str(doc["error"]))
    try:
        num_reads = int(doc["num_reads"])
        n = int(doc["n"])
        reads = _unpack_reads(doc["reads"], num_reads, n)
        energies = np.array([float(e) for e in doc["energies"]])
        elapsed = float(doc["elapsed"])
    except RemoteProtocolError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise RemoteProtocolError(f"malformed response: {exc}") from exc
    if energies.shape[0] != num_reads:
        raise RemoteProtocolError("energies length does not match num_reads")
    if num_reads != params.num_reads:
        raise RemoteProtocolError(
            f"backend returned {num_reads} reads, requested {params.num_reads}"
        )
    return SampleSet(
        reads=reads, energies=energies, elapsed=elapsed, params=params, qubits=qubits
    )


class LoopbackSampler:
    """Remote adapter wired to an in-process backend through the wire format.

    Useful both as the reference implementation of the contract and as the
    round-trip test double: for any seed it must reproduce SimulatedAnnealer
    exactly (elapsed aside).
    """

    def __init__(self, backend=None):
        self._backend = backend if backend is not None else SimulatedAnnealer()

    def sample(self, problem: PhysicalProblem, params: SamplerParams) -> SampleSet:
        request = encode_request(problem, params)
        model, qubits, decoded_params = decode_request(request)
        inner = PhysicalProblem(
            model=model,
            qubits=qubits,
            embedding=problem.embedding,
            chain_strength=problem.chain_strength,
            scale=problem.scale,
            noise_sigma=problem.noise_sigma,
        )
        response = encode_response(self._backend.sample(inner, decoded_params))
        return decode_response(response, params, qubits)
