"""Exception types raised across the pipeline."""


class DriveSenseError(Exception):
    """Base class for all pipeline errors."""


# --- stream parsing ---

class ParseError(DriveSenseError):
    pass


class ChecksumMismatch(ParseError):
    pass


class UnsupportedSentenceType(ParseError):
    pass


class MalformedField(ParseError):
    def __init__(self, field, detail=""):
        self.field = field
        super().__init__(f"malformed field '{field}'" + (f": {detail}" if detail else ""))


class UnsupportedPid(ParseError):
    pass


class PayloadLengthMismatch(ParseError):
    pass


class FieldCount(ParseError):
    pass


class NonNumeric(ParseError):
    def __init__(self, field, detail=""):
        self.field = field
        super().__init__(f"non-numeric field '{field}'" + (f": {detail}" if detail else ""))


class UnknownKind(ParseError):
    pass


class CameraKindMismatch(ParseError):
    pass


# --- time sync ---

class InsufficientAnchors(DriveSenseError):
    pass


class DegenerateFit(DriveSenseError):
    pass


class TooFewSamples(DriveSenseError):
    pass


# --- motion / vision analytics ---

class NoQuiescentPeriod(DriveSenseError):
    pass


class NoOverlap(DriveSenseError):
    pass


class EmptyStream(DriveSenseError):
    pass


# --- map matching ---

class EmptyNetwork(DriveSenseError):
    pass


class NoCandidates(DriveSenseError):
    pass


class Unreachable(DriveSenseError):
    pass


# --- simulator ---

class ScriptEventOutsideDrive(DriveSenseError):
    pass


# --- storage / config ---

class UnknownKey(DriveSenseError):
    pass


class TypeMismatch(DriveSenseError):
    pass


class IncompleteTrips(DriveSenseError):
    def __init__(self, trip_ids):
        self.trip_ids = list(trip_ids)
        super().__init__("trips not at required stage: " + ", ".join(self.trip_ids))


class StageOrderError(DriveSenseError):
    def __init__(self, missing, requested):
        self.missing = missing
        self.requested = requested
        super().__init__(f"stage '{requested}' requires '{missing}' to run first")


class HashMismatch(DriveSenseError):
    def __init__(self, path, expected, actual):
        self.path = path
        super().__init__(f"hash mismatch for {path}: expected {expected[:16]}..., got {actual[:16]}...")
