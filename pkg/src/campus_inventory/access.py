"""Authentication, sessions, roles and the biometric login gate.

Role definitions (level + grants) live in the store; sessions and pending
biometric challenges live in an in-memory registry guarded by a lock.
Permission checks are deny-by-default and never mutate anything.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timedelta

from .errors import (
    AccountBlocked,
    AuthFailed,
    BiometricMismatch,
    ChallengeExpired,
    NotFound,
    PermissionDenied,
    UnsupportedLanguage,
    ValidationFailed,
)
from .storage import Store

LEVELS = ("Level1", "Level2", "Level3")
SUPPORTED_LANGUAGES = ("en", "fr")

PBKDF2_ITERATIONS = 60_000


def level_rank(level: str) -> int:
    return LEVELS.index(level)


def hash_password(password: str, *, iterations: int = PBKDF2_ITERATIONS) -> str:
    salt = secrets.token_hex(16)
    digest = hashlib.pbkdf2_hmac(
        "sha256", password.encode(), bytes.fromhex(salt), iterations)
    return f"pbkdf2_sha256${iterations}${salt}${digest.hex()}"


def verify_password(password: str, stored: str | None) -> bool:
    if not stored:
        return False
    try:
        scheme, iterations, salt, expected = stored.split("$")
        if scheme != "pbkdf2_sha256":
            return False
        digest = hashlib.pbkdf2_hmac(
            "sha256", password.encode(), bytes.fromhex(salt), int(iterations))
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(digest.hex(), expected)


@dataclass(frozen=True)
class PermissionSet:
    """Allowed (action, kind) pairs plus the holder's approval level."""

    grants: frozenset
    level: str = "Level1"

    def allows(self, action: str, kind: str) -> bool:
        return (action, kind) in self.grants


@dataclass
class Session:
    token: str
    person_id: int
    username: str
    permissions: PermissionSet
    language: str = "en"
    created_at: datetime = field(default_factory=datetime.now)
    expires_at: datetime = field(default_factory=datetime.now)


@dataclass
class BiometricChallenge:
    challenge_id: str
    person_id: int
    nonce: str
    status: str = "pending"  # pending | passed | failed
    expires_at: datetime = field(default_factory=datetime.now)


@dataclass(frozen=True)
class Decision:
    allowed: bool
    reason: str | None = None

    def __bool__(self):
        return self.allowed


ALLOW = Decision(True)


class BiometricVerifier:
    """Pluggable sample check; the stub compares bytes against enrollment."""

    def verify(self, sample, enrollment) -> bool:
        if sample is None or enrollment is None:
            return False
        left = sample.encode() if isinstance(sample, str) else bytes(sample)
        right = enrollment.encode() if isinstance(enrollment, str) else bytes(enrollment)
        return hmac.compare_digest(left, right)


class AccessControl:
    """Session registry and permission checks over one store."""

    def __init__(self, store: Store, session_ttl: timedelta = timedelta(minutes=30),
                 clock=None, verifier: BiometricVerifier | None = None):
        self._store = store
        self._ttl = session_ttl
        self._clock = clock or datetime.now
        self._verifier = verifier or BiometricVerifier()
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._challenges: dict[str, BiometricChallenge] = {}

    # -- authentication -------------------------------------------------

    def _person_row(self, username: str):
        rows = self._store.raw_select(
            "SELECT Person_ID, UserName, Password, Status, Check_Biometric "
            "FROM person WHERE UserName = ? "
            "ORDER BY (Status = 'deleted') ASC, Person_ID DESC LIMIT 1",
            (username,))
        return rows[0] if rows else None

    def authenticate(self, username: str, password: str):
        """Password login; flagged users get a biometric challenge instead."""
        row = self._person_row(username)
        if row is None:
            raise AuthFailed("wrong username or password")
        person_id, _, digest, status, check_biometric = row
        if not verify_password(password, digest):
            raise AuthFailed("wrong username or password")
        if status in ("blocked", "deleted"):
            raise AccountBlocked("this account cannot log in")
        if check_biometric:
            challenge = BiometricChallenge(
                challenge_id=uuid.uuid4().hex,
                person_id=person_id,
                nonce=secrets.token_hex(16),
                expires_at=self._clock() + timedelta(minutes=5))
            with self._lock:
                self._challenges[challenge.challenge_id] = challenge
            return challenge
        return self._mint_session(person_id, username)

    def complete_biometric(self, challenge_id: str, sample) -> Session:
        """Second login step: verify the sample and mint the session."""
        with self._lock:
            challenge = self._challenges.get(challenge_id)
        if (challenge is None or challenge.status != "pending"
                or challenge.expires_at < self._clock()):
            raise ChallengeExpired("challenge is not pending")
        rows = self._store.raw_select(
            "SELECT Voice FROM voice WHERE Person_ID = ? ORDER BY Voice_ID DESC LIMIT 1",
            (challenge.person_id,))
        enrollment = rows[0][0] if rows else None
        if not self._verifier.verify(sample, enrollment):
            challenge.status = "failed"
            raise BiometricMismatch("biometric sample rejected")
        challenge.status = "passed"
        person = self._store.get_record("person", challenge.person_id)
        if person is None or person["status"] in ("blocked", "deleted"):
            raise AccountBlocked("this account cannot log in")
        return self._mint_session(challenge.person_id, person["username"])

    def _mint_session(self, person_id: int, username: str) -> Session:
        now = self._clock()
        session = Session(
            token=secrets.token_urlsafe(32),
            person_id=person_id,
            username=username,
            permissions=self.load_permissions(person_id),
            created_at=now,
            expires_at=now + self._ttl)
        with self._lock:
            self._sessions[session.token] = session
        return session

    def logout(self, token: str):
        with self._lock:
            self._sessions.pop(token, None)

    def session_for(self, token: str | None) -> Session | None:
        """Live session for a token, renewed on use; None otherwise."""
        if not token:
            return None
        now = self._clock()
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                return None
            if session.expires_at < now:
                del self._sessions[token]
                return None
            session.expires_at = now + self._ttl
        person = self._store.get_record("person", session.person_id)
        if person is None or person["status"] in ("blocked", "deleted"):
            self.logout(token)
            return None
        return session

    # -- permissions ------------------------------------------------------

    def load_permissions(self, person_id: int) -> PermissionSet:
        """Union of the person's role grants; level is the highest held."""
        grants = set()
        level = "Level1"
        for role_id, in self._store.raw_select(
                "SELECT Role_ID FROM person_roles WHERE Person_ID = ?", (person_id,)):
            for action, kind in self._store.raw_select(
                    "SELECT Action, Kind FROM role_grants WHERE Role_ID = ?", (role_id,)):
                grants.add((action, kind))
            for level_name, in self._store.raw_select(
                    "SELECT Level_Name FROM roles_set WHERE Role_ID = ?", (role_id,)):
                if level_name in LEVELS and level_rank(level_name) > level_rank(level):
                    level = level_name
        return PermissionSet(grants=frozenset(grants), level=level)

    def check_permission(self, session: Session | None, action: str, kind: str) -> Decision:
        if session is None:
            return Decision(False, "not authenticated")
        with self._lock:
            live = self._sessions.get(session.token)
        if live is None or live.expires_at < self._clock():
            return Decision(False, "session expired")
        if not session.permissions.allows(action, kind):
            return Decision(False, f"missing grant ({action}, {kind})")
        return ALLOW

    def require(self, session: Session | None, action: str, kind: str):
        decision = self.check_permission(session, action, kind)
        if not decision:
            raise PermissionDenied(decision.reason or "denied")

    # -- role administration ------------------------------------------------

    def assign_role(self, session: Session | None, person_id: int, role_id: str):
        """Bind a role to a person; takes effect on their next login."""
        self.require(session, "assign", "role")
        self._store.link("person_role", person_id, role_id,
                         actor=session.username if session else "system")

    def edit_role(self, session: Session | None, role_id: str,
                  description: str | None = None, level_name: str | None = None,
                  grants=None):
        """Replace a role definition atomically."""
        self.require(session, "edit", "role")
        if level_name is not None and level_name not in LEVELS:
            raise ValidationFailed(field_errors={"level_name": "unknown level"},
                                   submitted={"level_name": level_name})
        with self._store.transaction():
            if not self._store.raw_select(
                    "SELECT 1 FROM roles WHERE Role_ID = ?", (role_id,)):
                raise NotFound(f"no role {role_id!r}")
            if description is not None:
                self._store.raw_execute(
                    "UPDATE roles SET Description = ? WHERE Role_ID = ?",
                    (description, role_id))
            if level_name is not None:
                self._store.raw_execute(
                    "DELETE FROM roles_set WHERE Role_ID = ?", (role_id,))
                self._store.raw_execute(
                    "INSERT INTO roles_set (Role_ID, Level_Name) VALUES (?, ?)",
                    (role_id, level_name))
            if grants is not None:
                self._store.raw_execute(
                    "DELETE FROM role_grants WHERE Role_ID = ?", (role_id,))
                for action, kind in grants:
                    self._store.raw_execute(
                        "INSERT INTO role_grants (Role_ID, Action, Kind) VALUES (?, ?, ?)",
                        (role_id, action, kind))

    def list_roles(self) -> list[dict]:
        out = []
        for role_id, description in self._store.raw_select(
                "SELECT Role_ID, Description FROM roles ORDER BY Role_ID"):
            levels = [r[0] for r in self._store.raw_select(
                "SELECT Level_Name FROM roles_set WHERE Role_ID = ?", (role_id,))]
            grants = sorted(tuple(r) for r in self._store.raw_select(
                "SELECT Action, Kind FROM role_grants WHERE Role_ID = ?", (role_id,)))
            out.append({"role_id": role_id, "description": description,
                        "level_name": levels[0] if levels else "Level1",
                        "grants": grants})
        return out

    def roles_of(self, person_id: int) -> list[str]:
        return [r[0] for r in self._store.raw_select(
            "SELECT Role_ID FROM person_roles WHERE Person_ID = ? ORDER BY Role_ID",
            (person_id,))]

    # -- misc ---------------------------------------------------------------

    def set_language(self, session: Session, code: str):
        if code not in SUPPORTED_LANGUAGES:
            raise UnsupportedLanguage(f"unsupported language: {code}")
        session.language = code

    def enroll_voice(self, person_id: int, sample):
        """Store the opaque enrollment blob for the biometric stub."""
        value = sample.decode() if isinstance(sample, (bytes, bytearray)) else sample
        self._store.raw_insert("voice", {"Person_ID": person_id, "Voice": value})
