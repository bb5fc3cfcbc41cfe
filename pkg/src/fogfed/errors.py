"""Error taxonomy shared by every service in the federation testbed.

Each error carries a stable ``code`` that crosses process and protocol
boundaries: framed-channel responses and HTTP bodies serialize it as
``{"error": "<code>"}`` and clients re-raise the matching class.
"""

from __future__ import annotations


class FederationError(Exception):
    """Base class for protocol-level failures."""

    code = "federation_error"
    http_status = 400

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


# -- subscriber registry / vector vending ------------------------------------

class DuplicateImsi(FederationError):
    code = "duplicate_imsi"
    http_status = 409


class UnknownImsi(FederationError):
    code = "unknown_imsi"
    http_status = 404


class SubscriberDisabled(FederationError):
    code = "subscriber_disabled"
    http_status = 403


class ChannelNotSecured(FederationError):
    code = "channel_not_secured"
    http_status = 403


# -- relying-party registration and login flow --------------------------------

class InvalidRedirectUri(FederationError):
    code = "invalid_redirect_uri"


class UnknownClient(FederationError):
    code = "unknown_client"
    http_status = 401


class RedirectMismatch(FederationError):
    code = "redirect_mismatch"


class AuthFailed(FederationError):
    code = "auth_failed"
    http_status = 401


class ChallengeExpired(FederationError):
    code = "challenge_expired"


class InvalidCode(FederationError):
    code = "invalid_code"


class CodeReuse(FederationError):
    code = "code_reuse"


class ClientMismatch(FederationError):
    code = "client_mismatch"
    http_status = 401


class InvalidToken(FederationError):
    code = "invalid_token"
    http_status = 401


class NotRegistered(FederationError):
    code = "not_registered"


class SignatureInvalid(FederationError):
    code = "signature_invalid"
    http_status = 401


class NonceMismatch(FederationError):
    code = "nonce_mismatch"


class NotAdmitted(FederationError):
    code = "not_admitted"
    http_status = 403


# -- edge-side state and profiles ---------------------------------------------

class UnknownUser(FederationError):
    code = "unknown_user"
    http_status = 404


class NoSuchApp(FederationError):
    code = "no_such_app"
    http_status = 404


class PayloadTooLarge(FederationError):
    code = "payload_too_large"
    http_status = 413


class MecUnreachable(FederationError):
    code = "mec_unreachable"
    http_status = 502


# -- carried state tokens -------------------------------------------------------

class TokenInvalid(FederationError):
    code = "token_invalid"
    http_status = 401


class TokenExpired(FederationError):
    code = "token_expired"
    http_status = 401


class SubjectMismatch(FederationError):
    code = "subject_mismatch"
    http_status = 403


# -- benchmark harness ----------------------------------------------------------

class RateUnachievable(FederationError):
    code = "rate_unachievable"


class TopologyUnhealthy(FederationError):
    code = "topology_unhealthy"
    http_status = 503


class IoError(FederationError):
    code = "io_error"
    http_status = 500


def _registry() -> dict[str, type[FederationError]]:
    seen: dict[str, type[FederationError]] = {}
    stack = [FederationError]
    while stack:
        cls = stack.pop()
        seen[cls.code] = cls
        stack.extend(cls.__subclasses__())
    return seen


CODE_TO_ERROR = _registry()


def error_for_code(code: str, message: str = "") -> FederationError:
    """Rebuild the typed error from a wire-level code."""
    return CODE_TO_ERROR.get(code, FederationError)(message or code)
