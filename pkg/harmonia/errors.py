"""Exception hierarchy for the verification engine."""


class HarmoniaError(Exception):
    """Base class for every error raised by harmonia."""


class InputError(HarmoniaError):
    """Raised for bad user input; the CLI maps these to exit code 2."""


class CompositeModulusBase(InputError):
    def __init__(self, p: int):
        super().__init__(f"Modulus base {p} is not prime")
        self.p = p


class ModulusOverflow(HarmoniaError):
    def __init__(self, p: int, e: int):
        super().__init__(f"Modulus {p}^{e} does not fit below 2^63")
        self.p, self.e = p, e


class BadExponent(InputError):
    def __init__(self, e: int):
        super().__init__(f"Exponent must be 1 or 2, got {e}")
        self.e = e


class BadPrime(InputError):
    pass


class BadRange(InputError):
    pass


class TooLarge(InputError):
    pass


class UnknownCheck(InputError):
    def __init__(self, check_id: str):
        super().__init__(f"Unknown check: {check_id}")
        self.check_id = check_id


class PrimeTooSmall(InputError):
    def __init__(self, check_id: str, p: int, min_prime: int):
        super().__init__(f"Check {check_id} needs p >= {min_prime}, got {p}")
        self.check_id, self.p, self.min_prime = check_id, p, min_prime


class BadComposition(InputError):
    pass


class RingMismatch(HarmoniaError):
    def __init__(self, left: int, right: int):
        super().__init__(f"Residues from different rings: mod {left} vs mod {right}")


class NotInvertible(HarmoniaError):
    def __init__(self, value: int, modulus: int):
        super().__init__(f"{value} is not invertible mod {modulus}")
        self.value, self.modulus = value, modulus


class DenominatorDivisibleByP(HarmoniaError):
    pass


class PrimeMismatch(HarmoniaError):
    def __init__(self, left: int, right: int):
        super().__init__(f"Profiles belong to different primes: {left} vs {right}")


class MissingBernoulli(HarmoniaError):
    def __init__(self, check_id: str):
        super().__init__(f"Check {check_id} needs the residue of B_(p-5) mod p")


class EngineInvariantError(HarmoniaError):
    pass
