"""Binary PNM codec (P5 gray, P6 color), maxval 255 only.

The format is deliberately tiny so files written here are bit-exact
fixtures: a fixed-form header, then one byte per sample.  Reading
accepts '#' comments inside the header; writing never emits them.
"""

from __future__ import annotations

import numpy as np

from .core import ImageBuffer

_WHITESPACE = frozenset(b" \t\n\r\v\f")


class DecodeError(ValueError):
    """Raised on malformed input; the message names the byte offset."""


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        b = data[pos]
        if b in _WHITESPACE:
            pos += 1
        elif b == 0x23:  # '#': comment runs to end of line
            while pos < n and data[pos] not in (0x0A, 0x0D):
                pos += 1
        else:
            break
    if pos >= n:
        raise DecodeError(f"unexpected end of header at byte {pos}")
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != 0x23:
        pos += 1
    return data[start:pos], pos


def _int_token(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, end = _next_token(data, pos)
    if not token.isdigit():
        raise DecodeError(
            f"expected {what} at byte {end - len(token)}, got {token!r}"
        )
    return int(token), end


def read_pnm(data: bytes) -> ImageBuffer:
    """Decode a binary gray (P5) or color (P6) map into an image."""
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise DecodeError("input must be bytes")
    data = bytes(data)
    magic, pos = _next_token(data, 0)
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise DecodeError(
            f"expected P5 or P6 magic at byte {pos - len(magic)}, got {magic!r}"
        )
    width, pos = _int_token(data, pos, "width")
    height, pos = _int_token(data, pos, "height")
    if width < 1 or height < 1:
        raise DecodeError(f"degenerate size {width}x{height} at byte {pos}")
    maxval, pos = _int_token(data, pos, "maxval")
    if maxval != 255:
        raise DecodeError(f"unsupported maxval {maxval} at byte {pos}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise DecodeError(f"expected whitespace after maxval at byte {pos}")
    pos += 1  # exactly one separator byte, then raw samples
    need = width * height * channels
    have = len(data) - pos
    if have < need:
        raise DecodeError(
            f"truncated payload at byte {pos}: need {need} bytes, have {have}"
        )
    if have > need:
        raise DecodeError(f"trailing data after payload at byte {pos + need}")
    samples = np.frombuffer(data, dtype=np.uint8, count=need, offset=pos)
    if channels == 1:
        return ImageBuffer(samples.reshape(height, width).astype(np.float64))
    planes = samples.reshape(height, width, 3).transpose(2, 0, 1)
    return ImageBuffer(planes.astype(np.float64))


def write_pnm(img: ImageBuffer) -> bytes:
    """Encode an image as binary PNM, clamping to [0, 255].

    Samples round half away from zero, so 127.5 encodes as 128.  The
    header is byte-fixed: "P5\\n<W> <H>\\n255\\n" (P6 for color).
    """
    clamped = np.clip(img.data, 0.0, 255.0)
    samples = np.floor(clamped + 0.5).astype(np.uint8)
    if img.channels == 1:
        magic = "P5"
        payload = samples[0]
    else:
        magic = "P6"
        payload = samples.transpose(1, 2, 0)
    header = f"{magic}\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(payload).tobytes()
