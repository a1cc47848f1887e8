"""Coded interleaving tree: layered coded commitments over a block.

Every layer is a systematically coded vector of equal-size symbols; the
hashes of q consecutive-mod-s symbols of layer j are concatenated into
one data symbol of layer j-1 (interleaved batching), the top layer is
committed as one hash per symbol. Layers are numbered 0 (top, t = n_0
symbols) through num_layers-1 (base, M symbols); symbol indices are
0-based throughout.

A membership proof for symbol i of layer j carries, per layer above, the
parent data symbol minus one recomputable hash slot plus the full parity
sibling, giving the fixed proof payload of (2q-1) * hash_size bytes per
layer. Data symbols occupy positions 0..s_j-1, parity s_j..n_j-1, so a
proof references position i mod s and s + (i mod p) at each upper layer;
that map is what makes proof coverage scale with base coverage (the
repetition property).
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coding import systematic_encode
from .errors import InputError, ParameterError
from .graph import TannerGraph

HASH_SIZE = 32


def _hash(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


@dataclass(frozen=True)
class CitParams:
    block_size: int          # payload bytes committed per block
    hash_size: int = HASH_SIZE
    batch: int = 4           # hashes concatenated per parent data symbol
    num_layers: int = 4
    base_symbols: int = 256
    rate: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "rate", Fraction(self.rate))
        if self.hash_size != HASH_SIZE:
            raise ParameterError(f"hash function is SHA-256; hash_size must be {HASH_SIZE}")
        if self.block_size < 1 or self.batch < 1 or self.num_layers < 1:
            raise ParameterError("block_size, batch and num_layers must be positive")
        if not 0 < self.rate < 1:
            raise ParameterError("rate must lie in (0, 1)")
        for n in self.layer_sizes():
            if n < 1:
                raise ParameterError("every layer must have at least one symbol")
        sizes = self.layer_sizes()
        for j in range(self.num_layers - 1):
            s_up = self.data_count(j)
            if sizes[j + 1] % s_up or self.parity_count(j + 1) % s_up:
                raise ParameterError(
                    "layer sizes break the proof sibling alignment; "
                    "batch * rate and batch * (1 - rate) must be integers")

    def layer_sizes(self) -> list[int]:
        """Symbol count per layer, top first; the base layer holds
        base_symbols and each level up shrinks by a factor batch*rate."""
        shrink = self.batch * self.rate
        out = []
        for j in range(self.num_layers):
            n = Fraction(self.base_symbols) / shrink ** (self.num_layers - 1 - j)
            if n.denominator != 1:
                raise ParameterError(
                    f"layer {j} size {n} is not an integer; adjust batch/rate/base")
            s = n * self.rate
            if s.denominator != 1:
                raise ParameterError(f"layer {j} data count {s} is not an integer")
            out.append(int(n))
        return out

    def data_count(self, layer: int) -> int:
        return int(self.layer_sizes()[layer] * self.rate)

    def parity_count(self, layer: int) -> int:
        n = self.layer_sizes()[layer]
        return n - int(n * self.rate)

    @property
    def root_hashes(self) -> int:
        return self.layer_sizes()[0]

    def base_chunk_size(self) -> int:
        """Stored base chunk size in whole bytes (cost accounting keeps
        the exact rational block_size / data_count separately)."""
        s = self.data_count(self.num_layers - 1)
        return -(-self.block_size // s)

    def proof_indices(self, layer: int, index: int) -> list[tuple[int, int]]:
        """(data_index, parity_index) referenced at each layer above
        `layer`, ordered top to bottom (layers 0 .. layer-1)."""
        sizes = self.layer_sizes()
        if not 0 <= layer < self.num_layers:
            raise InputError(f"layer {layer} out of range")
        if not 0 <= index < sizes[layer]:
            raise InputError(f"index {index} out of range for layer {layer}")
        out = []
        for j in range(layer):
            s = self.data_count(j)
            p = sizes[j] - s
            out.append((index % s, s + (index % p)))
        return out


def layer_sizes(params: CitParams) -> list[int]:
    return params.layer_sizes()


@dataclass(frozen=True)
class ProofLayer:
    data_index: int
    parity_index: int
    omitted_slot: int               # hash slot of the child recomputed below
    data_hashes: tuple[bytes, ...]  # q-1 transmitted hashes of the data symbol
    parity_symbol: bytes


@dataclass(frozen=True)
class ProofOfMembership:
    layer: int
    index: int
    parts: tuple[ProofLayer, ...]  # layers 0 .. layer-1, top to bottom

    def byte_size(self) -> int:
        return sum(len(p.parity_symbol) + sum(len(h) for h in p.data_hashes)
                   for p in self.parts)


@dataclass(frozen=True)
class CodedInterleavingTree:
    params: CitParams
    layers: tuple[tuple[bytes, ...], ...]  # layers[0] = top layer symbols
    root: tuple[bytes, ...]

    def symbol(self, layer: int, index: int) -> bytes:
        return self.layers[layer][index]


def _child_slot(params: CitParams, parent_layer: int, child_index: int) -> int:
    # parent data symbol i at layer j batches children x with x mod s_j == i,
    # ordered by x; the slot of child x is x // s_j
    return child_index // params.data_count(parent_layer)


def build_cit(block: bytes, params: CitParams,
              codes: Sequence[TannerGraph]) -> CodedInterleavingTree:
    """Encode a block into the full layered tree.

    codes[j] is the code of layer j and must have layer_sizes()[j] VNs
    with parity_count(j) CNs. The block is zero-padded to fill the base
    data symbols.
    """
    sizes = params.layer_sizes()
    if len(codes) != params.num_layers:
        raise ParameterError(f"need {params.num_layers} codes, got {len(codes)}")
    for j, g in enumerate(codes):
        if g.num_vns != sizes[j] or g.num_cns != params.parity_count(j):
            raise ParameterError(
                f"layer {j} code is {g.num_cns}x{g.num_vns}, "
                f"expected {params.parity_count(j)}x{sizes[j]}")
    if len(block) > params.block_size:
        raise ParameterError(
            f"block of {len(block)} bytes exceeds block_size {params.block_size}")

    base = params.num_layers - 1
    s_base = params.data_count(base)
    chunk = params.base_chunk_size()
    padded = block.ljust(s_base * chunk, b"\0")
    data = [padded[i * chunk:(i + 1) * chunk] for i in range(s_base)]

    layers: list[tuple[bytes, ...]] = [()] * params.num_layers
    layers[base] = tuple(systematic_encode(codes[base], data))
    for j in range(base - 1, -1, -1):
        s_j = params.data_count(j)
        hashes = [_hash(sym) for sym in layers[j + 1]]
        parent_data = [
            b"".join(hashes[x] for x in range(i, len(hashes), s_j))
            for i in range(s_j)
        ]
        layers[j] = tuple(systematic_encode(codes[j], parent_data))
    root = tuple(_hash(sym) for sym in layers[0])
    return CodedInterleavingTree(params, tuple(layers), root)


def pom(tree: CodedInterleavingTree, layer: int, index: int) -> ProofOfMembership:
    """Membership proof for symbol (layer, index): per upper layer, the
    parent data symbol with the recomputable hash slot omitted, plus the
    full parity sibling."""
    params = tree.params
    refs = params.proof_indices(layer, index)
    parts = []
    child = index
    for j in range(layer - 1, -1, -1):
        d_idx, p_idx = refs[j]
        slot = _child_slot(params, j, child)
        sym = tree.symbol(j, d_idx)
        y = params.hash_size
        hashes = tuple(sym[i * y:(i + 1) * y] for i in range(params.batch))
        parts.append(ProofLayer(
            data_index=d_idx,
            parity_index=p_idx,
            omitted_slot=slot,
            data_hashes=hashes[:slot] + hashes[slot + 1:],
            parity_symbol=tree.symbol(j, p_idx),
        ))
        child = d_idx
    parts.reverse()
    return ProofOfMembership(layer, index, tuple(parts))


def verify_chunk(root: Sequence[bytes], params: CitParams, layer: int,
                 index: int, chunk: bytes, proof: ProofOfMembership) -> bool:
    """Check a symbol against the committed root through its proof.

    Reconstructs each parent data symbol by inserting the recomputed
    child hash, checks the parity sibling's hash against the
    reconstructed parent, and finally both top symbols against the root.
    """
    if len(root) != params.root_hashes:
        raise InputError(f"root must carry {params.root_hashes} hashes")
    if proof.layer != layer or proof.index != index:
        return False
    refs = params.proof_indices(layer, index)
    if len(proof.parts) != layer:
        raise InputError(f"proof must carry {layer} layers, has {len(proof.parts)}")
    y = params.hash_size
    for part, (d_idx, p_idx) in zip(proof.parts, refs):
        if part.data_index != d_idx or part.parity_index != p_idx:
            return False
        if len(part.data_hashes) != params.batch - 1:
            raise InputError("malformed proof: wrong data hash count")
        if any(len(h) != y for h in part.data_hashes):
            raise InputError("malformed proof: bad hash size")

    child_hash = _hash(chunk)
    child_index = index
    reconstructed: list[bytes] = []
    for j in range(layer - 1, -1, -1):
        part = proof.parts[j]
        slot = _child_slot(params, j, child_index)
        if not 0 <= part.omitted_slot < params.batch or part.omitted_slot != slot:
            return False
        hashes = part.data_hashes[:slot] + (child_hash,) + part.data_hashes[slot:]
        parent = b"".join(hashes)
        reconstructed.append(parent)
        # the parity sibling of the layer below must hash into this parent
        if j < layer - 1:
            below = proof.parts[j + 1]
            p_slot = _child_slot(params, j, below.parity_index)
            if hashes[p_slot] != _hash(below.parity_symbol):
                return False
        child_hash = _hash(parent)
        child_index = part.data_index
    if layer == 0:
        return _hash(chunk) == root[index]
    top = proof.parts[0]
    return (child_hash == root[top.data_index]
            and _hash(top.parity_symbol) == root[top.parity_index])


def pom_index_cover(params: CitParams, base_indices) -> list[frozenset[int]]:
    """Per upper layer, the symbol indices referenced by the proofs of
    the given base indices (data and parity combined)."""
    M = params.layer_sizes()[-1]
    base_indices = set(base_indices)
    for i in base_indices:
        if not 0 <= i < M:
            raise InputError(f"base index {i} out of range")
    covers = []
    for j in range(params.num_layers - 1):
        s = params.data_count(j)
        p = params.parity_count(j)
        cov = set()
        for i in base_indices:
            cov.add(i % s)
            cov.add(s + (i % p))
        covers.append(frozenset(cov))
    return covers


# ---------------------------------------------------------------------------
# serialization

_MAGIC = b"CITREE1\n"


def save_tree(tree: CodedInterleavingTree, path) -> None:
    p = tree.params
    header = (f"block_size={p.block_size} hash_size={p.hash_size} "
              f"batch={p.batch} num_layers={p.num_layers} "
              f"base_symbols={p.base_symbols} rate={p.rate}\n").encode()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(header)
        for layer in tree.layers:
            fh.write(struct.pack("<II", len(layer), len(layer[0])))
            for sym in layer:
                fh.write(sym)


def load_tree(path) -> CodedInterleavingTree:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise InputError(f"{path} is not a tree file")
        fields = dict(kv.split("=") for kv in fh.readline().decode().split())
        params = CitParams(
            block_size=int(fields["block_size"]),
            hash_size=int(fields["hash_size"]),
            batch=int(fields["batch"]),
            num_layers=int(fields["num_layers"]),
            base_symbols=int(fields["base_symbols"]),
            rate=Fraction(fields["rate"]),
        )
        layers = []
        for _ in range(params.num_layers):
            count, size = struct.unpack("<II", fh.read(8))
            layers.append(tuple(fh.read(size) for _ in range(count)))
    root = tuple(_hash(sym) for sym in layers[0])
    return CodedInterleavingTree(params, tuple(layers), root)


def pom_to_bytes(proof: ProofOfMembership) -> bytes:
    """Length-prefixed wire record; the payload length is exactly the
    transmitted proof bytes (omitted hashes excluded)."""
    payload = b"".join(
        b"".join(part.data_hashes) + part.parity_symbol for part in proof.parts)
    head = struct.pack("<IIII", proof.layer, proof.index, len(proof.parts),
                       len(payload))
    return head + payload


def pom_from_bytes(data: bytes, params: CitParams) -> ProofOfMembership:
    layer, index, n_parts, paylen = struct.unpack("<IIII", data[:16])
    if n_parts != layer:
        raise InputError("malformed proof record: layer/part mismatch")
    payload = data[16:16 + paylen]
    if len(payload) != paylen:
        raise InputError("malformed proof record: truncated payload")
    refs = params.proof_indices(layer, index)
    y = params.hash_size
    q = params.batch
    parts = []
    pos = 0
    child = index
    slots = []
    for j in range(layer - 1, -1, -1):
        slots.append(_child_slot(params, j, child))
        child = refs[j][0]
    slots.reverse()
    sym_size = q * y
    for j, (d_idx, p_idx) in enumerate(refs):
        hashes = tuple(payload[pos + i * y: pos + (i + 1) * y] for i in range(q - 1))
        pos += (q - 1) * y
        parity = payload[pos:pos + sym_size]
        pos += sym_size
        parts.append(ProofLayer(d_idx, p_idx, slots[j], hashes, parity))
    if pos != paylen:
        raise InputError("malformed proof record: length mismatch")
    return ProofOfMembership(layer, index, tuple(parts))
