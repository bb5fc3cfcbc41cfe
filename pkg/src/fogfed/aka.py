"""Cellular challenge/response core.

Network side mints authentication vectors from long-term SIM key material,
the device side verifies the network token and answers the challenge. The
f1..f5* functions follow the standard AES-based algorithm set (the one used
by real SIM cards), so outputs can be checked against published conformance
data. The 256-bit session key binds the serving-network identity and the
masked sequence number through an HMAC-SHA-256 KDF.
"""

from __future__ import annotations

import hmac
import hashlib
import os
import re
from dataclasses import dataclass
from typing import Optional

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

# Authentication management field with the separation bit set, as used for
# vectors destined to a packet-core MME.
AMF = b"\x80\x00"

DEFAULT_SQN_WINDOW = 32

MAC_FAILURE = "mac_failure"
SYNC_FAILURE = "sync_failure"

_IMSI_RE = re.compile(r"^[0-9]{15}$")
_SQN_MAX = 1 << 48


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


@dataclass
class SimCredentials:
    """Long-term subscriber secrets plus this side's sequence counter.

    Network and device each keep their own copy. ``sqn`` is the next value
    this side will embed (network) or the lowest value it will still accept
    (device); it only ever increases.
    """

    imsi: str
    k: bytes
    opc: bytes
    sqn: int = 0

    def __post_init__(self):
        if not _IMSI_RE.match(self.imsi):
            raise ValueError("imsi must be exactly 15 decimal digits")
        if len(self.k) != 16:
            raise ValueError("k must be 16 bytes")
        if len(self.opc) != 16:
            raise ValueError("opc must be 16 bytes")
        if not 0 <= self.sqn < _SQN_MAX:
            raise ValueError("sqn out of 48-bit range")

    def copy(self) -> "SimCredentials":
        return SimCredentials(self.imsi, self.k, self.opc, self.sqn)


@dataclass(frozen=True)
class AuthVector:
    """One challenge quintuple: 128-bit RAND, 64-bit XRES, 128-bit AUTN
    (SQN^AK | AMF | MAC), 256-bit session key."""

    rand: bytes
    xres: bytes
    autn: bytes
    k_asme: bytes

    def __post_init__(self):
        if (len(self.rand), len(self.xres), len(self.autn), len(self.k_asme)) != (16, 8, 16, 32):
            raise ValueError("auth vector field widths are fixed")


@dataclass(frozen=True)
class UeAuthResult:
    """Device-side outcome: RES plus session key, or a failure reason."""

    res: Optional[bytes] = None
    k_asme: Optional[bytes] = None
    failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failure is None


class Milenage:
    """The f1/f1*/f2..f5/f5* function family for one (K, OPc) pair."""

    # per-function constants: 128-bit additive masks and left rotations
    _C = [bytes(15) + bytes([c]) for c in (0, 1, 2, 4, 8)]
    _R = [8, 0, 4, 8, 12]  # rotations in bytes (64, 0, 32, 64, 96 bits)

    def __init__(self, k: bytes, opc: bytes):
        self._algo = algorithms.AES(k)
        self._opc = opc

    def _enc(self, block: bytes) -> bytes:
        enc = Cipher(self._algo, modes.ECB()).encryptor()
        return enc.update(block) + enc.finalize()

    @staticmethod
    def _rot(block: bytes, nbytes: int) -> bytes:
        return block[nbytes:] + block[:nbytes]

    def _temp(self, rand: bytes) -> bytes:
        return self._enc(_xor(rand, self._opc))

    def _f1_block(self, rand: bytes, sqn: bytes, amf: bytes) -> bytes:
        in1 = sqn + amf + sqn + amf
        arg = _xor(self._temp(rand), _xor(self._rot(_xor(in1, self._opc), self._R[0]), self._C[0]))
        return _xor(self._enc(arg), self._opc)

    def _out(self, rand: bytes, idx: int) -> bytes:
        arg = _xor(self._rot(_xor(self._temp(rand), self._opc), self._R[idx]), self._C[idx])
        return _xor(self._enc(arg), self._opc)

    def f1(self, rand: bytes, sqn: bytes, amf: bytes) -> bytes:
        """Network authentication code MAC-A."""
        return self._f1_block(rand, sqn, amf)[:8]

    def f1_star(self, rand: bytes, sqn: bytes, amf: bytes) -> bytes:
        """Resynchronisation code MAC-S."""
        return self._f1_block(rand, sqn, amf)[8:]

    def f2345(self, rand: bytes) -> tuple[bytes, bytes, bytes, bytes]:
        """Return (RES, CK, IK, AK)."""
        out2 = self._out(rand, 1)
        out3 = self._out(rand, 2)
        out4 = self._out(rand, 3)
        return out2[8:], out3, out4, out2[:6]

    def f5_star(self, rand: bytes) -> bytes:
        """Anonymity key for resynchronisation."""
        return self._out(rand, 4)[:6]


def opc_from_op(k: bytes, op: bytes) -> bytes:
    """Derive the subscriber-bound operator constant from the shared one."""
    m = Milenage(k, bytes(16))
    return _xor(m._enc(op), op)


def derive_k_asme(ck: bytes, ik: bytes, snid: str, sqn_xor_ak: bytes) -> bytes:
    """Session-key KDF: HMAC-SHA-256 keyed with CK|IK over the serving
    network id and the masked sequence number, standard framing."""
    name = snid.encode()
    data = b"\x10" + name + len(name).to_bytes(2, "big") + sqn_xor_ak + b"\x00\x06"
    return hmac.new(ck + ik, data, hashlib.sha256).digest()


def generate_auth_vector(
    creds: SimCredentials, snid: str, rand: Optional[bytes] = None
) -> AuthVector:
    """Mint one fresh vector for ``snid``, consuming one sequence number.

    ``rand`` may be injected for deterministic tests; the default draws from
    the OS CSPRNG. Callers must serialize access per subscriber (the SQN
    advance is the only mutation).
    """
    if not snid:
        raise ValueError("serving network id must be non-empty")
    if rand is None:
        rand = os.urandom(16)
    elif len(rand) != 16:
        raise ValueError("rand must be 16 bytes")

    m = Milenage(creds.k, creds.opc)
    sqn_b = creds.sqn.to_bytes(6, "big")
    mac_a = m.f1(rand, sqn_b, AMF)
    xres, ck, ik, ak = m.f2345(rand)
    sqn_ak = _xor(sqn_b, ak)
    creds.sqn += 1
    return AuthVector(
        rand=rand,
        xres=xres,
        autn=sqn_ak + AMF + mac_a,
        k_asme=derive_k_asme(ck, ik, snid, sqn_ak),
    )


def ue_compute_response(
    creds: SimCredentials,
    rand: bytes,
    autn: bytes,
    snid: str,
    sqn_window: int = DEFAULT_SQN_WINDOW,
) -> UeAuthResult:
    """Verify a network challenge and answer it.

    Checks the MAC embedded in ``autn`` under the SIM secrets, then requires
    the recovered sequence number to fall inside the device's acceptance
    window; on success the device counter jumps past the consumed value, so
    a replay of the same challenge fails with ``sync_failure``.
    """
    if len(rand) != 16 or len(autn) != 16:
        raise ValueError("rand and autn must be 16 bytes")

    m = Milenage(creds.k, creds.opc)
    res, ck, ik, ak = m.f2345(rand)
    sqn_ak, amf, mac = autn[:6], autn[6:8], autn[8:]
    sqn_b = _xor(sqn_ak, ak)
    if not hmac.compare_digest(m.f1(rand, sqn_b, amf), mac):
        return UeAuthResult(failure=MAC_FAILURE)
    sqn = int.from_bytes(sqn_b, "big")
    if not creds.sqn <= sqn < creds.sqn + sqn_window:
        return UeAuthResult(failure=SYNC_FAILURE)
    creds.sqn = sqn + 1
    return UeAuthResult(res=res, k_asme=derive_k_asme(ck, ik, snid, sqn_ak))


def verify_res(xres: bytes, res: bytes) -> bool:
    """Constant-time comparison of expected and received responses."""
    return hmac.compare_digest(xres, res)
