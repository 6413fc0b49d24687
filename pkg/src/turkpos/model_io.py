"""Bit-exact binary model file format.

Layout:
    magic "BLSTMPOS" | format version byte 0x01
    u32 LE byte length | UTF-8 JSON metadata
        {"embed_dim", "hidden_dim", "n_tags", "words": [...], "tags": [...]}
    parameter blocks, fixed order (embedding; forward W_f W_u W_c W_o
    b_f b_u b_c b_o; backward same; W_y; b_y), each as
        u32 LE rows | u32 LE cols | row-major float64 LE payload
    (vectors are stored as rows × 1)

Round trips reproduce every parameter bit-exactly.
"""

import json
import struct
from pathlib import Path

import numpy as np

from .errors import CorruptFile, FormatVersionMismatch
from .lstm import PARAM_FIELDS, LstmParams
from .model import BlstmModel, OutputParams
from .vocab import Vocabulary

MAGIC = b"BLSTMPOS"
FORMAT_VERSION = 1


def serialize(model: BlstmModel) -> bytes:
    meta = {
        "embed_dim": model.embed_dim,
        "hidden_dim": model.hidden_dim,
        "n_tags": model.n_tags,
        "words": model.vocab.id_to_word,
        "tags": model.vocab.id_to_tag,
    }
    meta_bytes = json.dumps(meta, ensure_ascii=False).encode("utf-8")
    chunks = [MAGIC, bytes([FORMAT_VERSION]), struct.pack("<I", len(meta_bytes)), meta_bytes]
    for arr in model.parameters().values():
        mat = arr if arr.ndim == 2 else arr.reshape(-1, 1)
        chunks.append(struct.pack("<II", mat.shape[0], mat.shape[1]))
        chunks.append(np.ascontiguousarray(mat, dtype="<f8").tobytes())
    return b"".join(chunks)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptFile(
                f"unexpected end of file: wanted {n} bytes at offset {self.pos}, "
                f"have {len(self.data) - self.pos}"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def block(self, expect_shape: tuple[int, int]) -> np.ndarray:
        rows, cols = self.u32(), self.u32()
        if (rows, cols) != expect_shape:
            raise CorruptFile(f"parameter block is {rows}×{cols}, expected {expect_shape}")
        payload = self.take(rows * cols * 8)
        return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)


def deserialize(data: bytes) -> BlstmModel:
    reader = _Reader(data)
    if reader.take(len(MAGIC)) != MAGIC:
        raise CorruptFile("bad magic string; not a model file")
    version = reader.take(1)[0]
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(f"format version {version}, supported: {FORMAT_VERSION}")
    meta_len = reader.u32()
    try:
        meta = json.loads(reader.take(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"metadata block is not valid JSON: {exc}") from None
    try:
        embed_dim = int(meta["embed_dim"])
        hidden_dim = int(meta["hidden_dim"])
        n_tags = int(meta["n_tags"])
        words = list(meta["words"])
        tags = list(meta["tags"])
    except (KeyError, TypeError) as exc:
        raise CorruptFile(f"metadata is missing fields: {exc}") from None
    if n_tags != len(tags):
        raise CorruptFile(f"metadata n_tags {n_tags} does not match tag list ({len(tags)})")
    try:
        vocab = Vocabulary(id_to_word=words, id_to_tag=tags)
    except ValueError as exc:
        raise CorruptFile(str(exc)) from None

    z = hidden_dim + embed_dim
    embedding = reader.block((len(words), embed_dim))

    def read_lstm() -> LstmParams:
        weights = [reader.block((hidden_dim, z)) for _ in range(4)]
        biases = [reader.block((hidden_dim, 1)).reshape(-1) for _ in range(4)]
        return LstmParams(*weights, *biases)

    forward_lstm = read_lstm()
    backward_lstm = read_lstm()
    w_y = reader.block((n_tags, 2 * hidden_dim))
    b_y = reader.block((n_tags, 1)).reshape(-1)
    if reader.pos != len(data):
        raise CorruptFile(f"{len(data) - reader.pos} trailing bytes after last block")
    return BlstmModel(embedding, forward_lstm, backward_lstm, OutputParams(w_y, b_y), vocab)


def save_model(model: BlstmModel, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(serialize(model))


def load_model(path: str | Path) -> BlstmModel:
    return deserialize(Path(path).read_bytes())
