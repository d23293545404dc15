"""Cryptanalysis toolkit: rank-one-masked McEliece over GRS codes and the
square-code attack that breaks it."""

from .gf import GF, FieldError, NoRoot, NonPrimeCharacteristic, ReducibleModulus
from .codes import LinearCode, code_from_generator, distinguish
from .grs import GrsParams
from .scheme import PublicKey, SecretKey, keygen, encrypt, decrypt
from .attack import AttackConfig, RecoveredKey, recover_key, decrypt_with_pair

__version__ = "0.1.0"

__all__ = [
    "GF",
    "FieldError",
    "NoRoot",
    "NonPrimeCharacteristic",
    "ReducibleModulus",
    "LinearCode",
    "code_from_generator",
    "distinguish",
    "GrsParams",
    "PublicKey",
    "SecretKey",
    "keygen",
    "encrypt",
    "decrypt",
    "AttackConfig",
    "RecoveredKey",
    "recover_key",
    "decrypt_with_pair",
]
