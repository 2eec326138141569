"""
NetPBM reader and writer: P2/P5 (grayscale) and P3/P6 (RGB), maxval <= 255.
"""
from pathlib import Path

import numpy as np

from pixelband.src.errors import InvalidArgumentError, NetpbmParseError
from pixelband.src.imaging.image import MAX_MAXVAL, Image, Scale

MAGIC = {
    b"P2": (1, False),
    b"P3": (3, False),
    b"P5": (1, True),
    b"P6": (3, True),
}
WHITESPACE = b" \t\r\n\v\f"


class _Tokens:
    """Header tokenizer that skips '#' comments and tracks byte offsets."""

    def __init__(self, raw: bytes, pos: int):
        self.raw = raw
        self.pos = pos

    def _skip(self) -> None:
        raw = self.raw
        while self.pos < len(raw):
            byte = raw[self.pos:self.pos + 1]
            if byte in WHITESPACE:
                self.pos += 1
            elif byte == b"#":
                end = raw.find(b"\n", self.pos)
                self.pos = len(raw) if end < 0 else end + 1
            else:
                return

    def offset(self) -> int:
        """Byte offset of the next token."""
        self._skip()
        return self.pos

    def next_int(self, what: str) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.raw) and self.raw[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if start >= len(self.raw):
                raise NetpbmParseError(f"unexpected end of file while reading {what}", start)
            raise NetpbmParseError(f"expected an integer for {what}", start)
        return int(self.raw[start:self.pos])


def parse_netpbm(raw: bytes) -> Image:
    """Decode the bytes of a P2/P3/P5/P6 file."""
    magic = raw[:2]
    if magic not in MAGIC:
        raise NetpbmParseError(f"unsupported magic number {magic!r}", 0)
    channels, binary = MAGIC[magic]

    tokens = _Tokens(raw, 2)
    width = tokens.next_int("width")
    height = tokens.next_int("height")
    maxval_at = tokens.offset()
    maxval = tokens.next_int("maxval")
    if width < 1 or height < 1:
        raise NetpbmParseError(f"invalid dimensions {width}x{height}", maxval_at)
    if not 1 <= maxval <= MAX_MAXVAL:
        raise NetpbmParseError(f"unsupported maxval {maxval}", maxval_at)

    count = width * height * channels
    if binary:
        # exactly one whitespace byte separates the header from the payload
        start = tokens.pos
        if start >= len(raw) or raw[start:start + 1] not in WHITESPACE:
            raise NetpbmParseError("missing whitespace before the pixel data", start)
        start += 1
        payload = raw[start:start + count]
        if len(payload) < count:
            raise NetpbmParseError(
                f"truncated payload: expected {count} bytes, found {len(payload)}",
                start + len(payload),
            )
        values = np.frombuffer(payload, dtype=np.uint8)
        if values.max(initial=0) > maxval:
            bad = int(np.argmax(values > maxval))
            raise NetpbmParseError(f"sample exceeds maxval {maxval}", start + bad)
    else:
        values = np.empty(count, dtype=np.uint8)
        for k in range(count):
            at = tokens.offset()
            v = tokens.next_int("sample")
            if v > maxval:
                raise NetpbmParseError(f"sample {v} exceeds maxval {maxval}", at)
            values[k] = v

    return Image(values.reshape(height, width, channels), scale=Scale.RAW, maxval=maxval)


def read_netpbm(path: str | Path) -> Image:
    return parse_netpbm(Path(path).read_bytes())


def encode_netpbm(image: Image, ascii: bool = False) -> bytes:
    if image.scale is not Scale.RAW:
        raise InvalidArgumentError("only raw images can be written; denormalize first")
    if image.channels not in (1, 3):
        raise InvalidArgumentError(f"NetPBM stores 1 or 3 channels, got {image.channels}")

    gray = image.channels == 1
    magic = ("P2" if gray else "P3") if ascii else ("P5" if gray else "P6")
    header = f"{magic}\n{image.width} {image.height}\n{image.maxval}\n".encode("ascii")
    if not ascii:
        return header + image.data.astype(np.uint8).tobytes()

    rows = image.data.reshape(image.height, -1)
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in rows)
    return header + body.encode("ascii") + b"\n"


def write_netpbm(image: Image, path: str | Path, ascii: bool = False) -> Path:
    """Binary P5/P6 by default; ascii=True writes P2/P3."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_netpbm(image, ascii=ascii))
    return path
