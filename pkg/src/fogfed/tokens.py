"""Token formats crossing trust boundaries.

Two kinds of tokens leave the gateway's trust domain and must survive
hostile handling:

* signed claim sets (ID tokens) — compact ``header.claims.signature`` text,
  HMAC-SHA-256 under the relying party's client secret;
* state tokens — application state sealed with AES-256-GCM under a
  pre-shared federation key, carried by the device as one base64 blob.

Decoders are strict about canonical encoding: a part that does not
re-encode to the exact presented text is rejected, so *every* single-bit
mutation of the wire form fails verification (plain base64 decoders would
silently ignore unused trailing bits).
"""

from __future__ import annotations

import base64
import binascii
import hmac
import hashlib
import json
import os
import struct
import time
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import SignatureInvalid, TokenExpired, TokenInvalid

STATE_TOKEN_CIPHER = "aes-256-gcm"
_NONCE_LEN = 12


def _canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def b64url_encode(raw: bytes) -> str:
    return base64.urlsafe_b64encode(raw).rstrip(b"=").decode("ascii")


def b64url_decode(text: str) -> bytes:
    """Strict unpadded base64url decode; rejects non-canonical encodings."""
    try:
        raw = base64.urlsafe_b64decode(text + "=" * (-len(text) % 4))
    except (binascii.Error, ValueError, UnicodeEncodeError):
        raise ValueError("malformed base64url")
    if b64url_encode(raw) != text:
        raise ValueError("non-canonical base64url")
    return raw


def b64_blob_encode(raw: bytes) -> str:
    return base64.b64encode(raw).decode("ascii")


def b64_blob_decode(text: str) -> bytes:
    try:
        raw = base64.b64decode(text.encode("ascii"), validate=True)
    except (binascii.Error, ValueError, UnicodeEncodeError):
        raise ValueError("malformed base64")
    if b64_blob_encode(raw) != text:
        raise ValueError("non-canonical base64")
    return raw


def imsi_pseudonym(key: bytes, imsi: str) -> str:
    """Stable subscriber pseudonym; keeps the raw identity out of claims."""
    return hmac.new(key, imsi.encode(), hashlib.sha256).hexdigest()[:32]


# -- signed claim sets ---------------------------------------------------------

def sign_claims(claims: Mapping, key: bytes) -> str:
    header = {"alg": "HS256", "typ": "JWT"}
    signing_input = b64url_encode(_canonical_json(header)) + "." + b64url_encode(
        _canonical_json(dict(claims))
    )
    sig = hmac.new(key, signing_input.encode("ascii"), hashlib.sha256).digest()
    return signing_input + "." + b64url_encode(sig)


def verify_claims(token: str, key: bytes) -> dict:
    """Return the claims iff the signature verifies over the presented text."""
    parts = token.split(".")
    if len(parts) != 3:
        raise SignatureInvalid("token must have three parts")
    try:
        header = json.loads(b64url_decode(parts[0]))
        claims = json.loads(b64url_decode(parts[1]))
        sig = b64url_decode(parts[2])
    except (ValueError, UnicodeDecodeError):
        raise SignatureInvalid("undecodable token part")
    if not isinstance(header, dict) or header.get("alg") != "HS256":
        raise SignatureInvalid("unsupported algorithm")
    if not isinstance(claims, dict):
        raise SignatureInvalid("claims must be an object")
    expected = hmac.new(key, (parts[0] + "." + parts[1]).encode("ascii"), hashlib.sha256).digest()
    if not hmac.compare_digest(expected, sig):
        raise SignatureInvalid("signature mismatch")
    return claims


# -- sealed state tokens -------------------------------------------------------

@dataclass(frozen=True)
class StateTokenClaims:
    subject: str
    app_id: str
    seq: int
    payload: bytes
    issued_at: float
    expires_at: float


class StateTokenCodec:
    """Seal/open application state under a federation key ring.

    The blob layout is ``u16 header-length | header json | nonce | GCM
    ciphertext`` with the header ({key_id, cipher_id}) bound as AAD, all
    wrapped in canonical base64.
    """

    def __init__(
        self,
        keys: Mapping[str, bytes],
        default_key_id: Optional[str] = None,
        clock: Callable[[], float] = time.time,
    ):
        if not keys:
            raise ValueError("need at least one federation key")
        for key_id, key in keys.items():
            if len(key) != 32:
                raise ValueError(f"key {key_id!r} must be 32 bytes")
        self._keys = dict(keys)
        self._default = default_key_id or next(iter(keys))
        self._clock = clock

    def seal(
        self,
        subject: str,
        app_id: str,
        seq: int,
        payload: bytes,
        ttl_s: float,
        now: Optional[float] = None,
    ) -> str:
        if ttl_s <= 0:
            raise ValueError("ttl must be positive")
        now = self._clock() if now is None else now
        header = _canonical_json({"cipher_id": STATE_TOKEN_CIPHER, "key_id": self._default})
        claims = _canonical_json(
            {
                "subject": subject,
                "app_id": app_id,
                "seq": seq,
                "payload": b64url_encode(payload),
                "issued_at": now,
                "expires_at": now + ttl_s,
            }
        )
        nonce = os.urandom(_NONCE_LEN)
        ct = AESGCM(self._keys[self._default]).encrypt(nonce, claims, header)
        packed = struct.pack(">H", len(header)) + header + nonce + ct
        return b64_blob_encode(packed)

    def open(self, blob: str, now: Optional[float] = None) -> StateTokenClaims:
        now = self._clock() if now is None else now
        try:
            packed = b64_blob_decode(blob)
        except ValueError:
            raise TokenInvalid("not canonical base64")
        if len(packed) < 2:
            raise TokenInvalid("truncated token")
        hlen = struct.unpack(">H", packed[:2])[0]
        header_raw = packed[2 : 2 + hlen]
        rest = packed[2 + hlen :]
        if len(header_raw) != hlen or len(rest) < _NONCE_LEN + 16:
            raise TokenInvalid("truncated token")
        try:
            header = json.loads(header_raw)
        except (ValueError, UnicodeDecodeError):
            raise TokenInvalid("malformed header")
        if header.get("cipher_id") != STATE_TOKEN_CIPHER:
            raise TokenInvalid("unsupported cipher")
        key = self._keys.get(header.get("key_id"))
        if key is None:
            raise TokenInvalid("unknown key id")
        nonce, ct = rest[:_NONCE_LEN], rest[_NONCE_LEN:]
        try:
            claims_raw = AESGCM(key).decrypt(nonce, ct, header_raw)
        except InvalidTag:
            raise TokenInvalid("authentication failed")
        claims = json.loads(claims_raw)
        try:
            out = StateTokenClaims(
                subject=claims["subject"],
                app_id=claims["app_id"],
                seq=int(claims["seq"]),
                payload=b64url_decode(claims["payload"]),
                issued_at=float(claims["issued_at"]),
                expires_at=float(claims["expires_at"]),
            )
        except (KeyError, TypeError, ValueError):
            raise TokenInvalid("malformed claims")
        if out.expires_at <= now:
            raise TokenExpired("token validity elapsed")
        return out
