"""Independent reference computations used only as test oracles.

Deliberately written from the algorithm definitions and kept structurally
different from the production code (integer arithmetic instead of byte
slicing, no shared helpers), so agreement between the two is meaningful.
"""

import hashlib
import hmac

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

_MASK128 = (1 << 128) - 1

# per-function additive constants and rotation amounts of the f1..f5* family
_C = (0, 1, 2, 4, 8)
_R = (64, 0, 32, 64, 96)


def _aes_block(key: bytes, block: bytes) -> bytes:
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


def _i(raw: bytes) -> int:
    return int.from_bytes(raw, "big")


def _b(value: int, width: int = 16) -> bytes:
    return value.to_bytes(width, "big")


def _rotl(value: int, bits: int) -> int:
    return ((value << bits) | (value >> (128 - bits))) & _MASK128


def _out(k: bytes, opc: int, temp: int, extra: int, idx: int) -> int:
    arg = _rotl((temp ^ extra ^ opc) & _MASK128, _R[idx]) ^ _C[idx]
    return _i(_aes_block(k, _b(arg))) ^ opc


def oracle_opc(k: bytes, op: bytes) -> bytes:
    return _b(_i(_aes_block(k, op)) ^ _i(op))


def oracle_f1(k: bytes, opc: bytes, rand: bytes, sqn: bytes, amf: bytes):
    """Return (MAC-A, MAC-S)."""
    opc_i = _i(opc)
    temp = _i(_aes_block(k, _b(_i(rand) ^ opc_i)))
    in1 = (_i(sqn) << 16) | _i(amf)
    in1 |= in1 << 64
    # f1/f1* rotate the padded input, not temp
    arg = temp ^ _rotl(in1 ^ opc_i, _R[0]) ^ _C[0]
    out1 = _b(_i(_aes_block(k, _b(arg))) ^ opc_i)
    return out1[:8], out1[8:]


def oracle_f2345(k: bytes, opc: bytes, rand: bytes):
    """Return (RES, CK, IK, AK)."""
    opc_i = _i(opc)
    temp = _i(_aes_block(k, _b(_i(rand) ^ opc_i)))
    out2 = _out(k, opc_i, temp, 0, 1)
    out3 = _out(k, opc_i, temp, 0, 2)
    out4 = _out(k, opc_i, temp, 0, 3)
    return _b(out2)[8:], _b(out3), _b(out4), _b(out2)[:6]


def oracle_f5(k: bytes, opc: bytes, rand: bytes) -> bytes:
    opc_i = _i(opc)
    temp = _i(_aes_block(k, _b(_i(rand) ^ opc_i)))
    return _b(_out(k, opc_i, temp, 0, 1) >> 80, 6)


def oracle_f5_star(k: bytes, opc: bytes, rand: bytes) -> bytes:
    opc_i = _i(opc)
    temp = _i(_aes_block(k, _b(_i(rand) ^ opc_i)))
    return _b(_out(k, opc_i, temp, 0, 4) >> 80, 6)


def oracle_session_key(ck: bytes, ik: bytes, snid: str, sqn_xor_ak: bytes) -> bytes:
    name = snid.encode()
    data = (
        b"\x10"
        + name
        + len(name).to_bytes(2, "big")
        + sqn_xor_ak
        + (6).to_bytes(2, "big")
    )
    return hmac.new(ck + ik, data, hashlib.sha256).digest()


def oracle_vector(k: bytes, opc: bytes, rand: bytes, sqn: int, amf: bytes, snid: str):
    """Full network-side vector: (rand, xres, autn, session key)."""
    sqn_b = sqn.to_bytes(6, "big")
    mac_a, _ = oracle_f1(k, opc, rand, sqn_b, amf)
    xres, ck, ik, _ = oracle_f2345(k, opc, rand)
    ak = oracle_f5(k, opc, rand)
    sqn_ak = _b(_i(sqn_b) ^ _i(ak), 6)
    autn = sqn_ak + amf + mac_a
    return rand, xres, autn, oracle_session_key(ck, ik, snid, sqn_ak)
