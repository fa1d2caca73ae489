"""Exception types raised across the package."""


class CombsimError(Exception):
    """Base class for all library errors."""


class ModelError(CombsimError):
    """A game or MDP description violates a structural invariant."""


class EmptyAvail(ModelError):
    def __init__(self, state):
        super().__init__(f"state {state!r} has no available action")
        self.state = state


class EmptyDelta(ModelError):
    def __init__(self, state, action):
        super().__init__(f"action {action!r} at state {state!r} has no successor")
        self.state = state
        self.action = action


class DanglingReference(ModelError):
    def __init__(self, ident):
        super().__init__(f"reference to undeclared id {ident!r}")
        self.ident = ident


class DuplicateId(ModelError):
    def __init__(self, ident):
        super().__init__(f"duplicate id {ident!r}")
        self.ident = ident


class ReservedName(ModelError):
    def __init__(self, ident):
        super().__init__(f"{ident!r} is reserved")
        self.ident = ident


class EmptyAvailInComposite(ModelError):
    def __init__(self, pair):
        super().__init__(f"composite state {pair!r} has no common action")
        self.pair = pair


class NotStrictlyAlternating(ModelError):
    pass


class NotAlternating(ModelError):
    pass


class MismatchedCarriers(ModelError):
    pass


class UnknownAtom(CombsimError):
    def __init__(self, atom):
        super().__init__(f"unknown atomic proposition {atom!r}")
        self.atom = atom


class WrongQuantifierFamily(CombsimError):
    pass


class PreconditionViolated(CombsimError):
    pass


class NotDistinguishable(CombsimError):
    pass


class NoCounterexample(CombsimError):
    pass


class MalformedDag(CombsimError):
    pass


class NotRefinable(CombsimError):
    pass


class ModelSyntaxError(CombsimError):
    def __init__(self, msg, line, col):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


class SchemaError(CombsimError):
    def __init__(self, field, msg=""):
        super().__init__(f"bad field {field!r}" + (f": {msg}" if msg else ""))
        self.field = field


class FormulaSyntaxError(CombsimError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos
