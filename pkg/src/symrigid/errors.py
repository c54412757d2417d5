"""Exception hierarchy shared by every module."""


class SymRigidError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class NotIndex2(SymRigidError):
    pass


class ContainsInversion(SymRigidError):
    pass


class NotAutomorphism(SymRigidError):
    pass


class ActionNotHomomorphism(SymRigidError):
    pass


class ActionNotFree(SymRigidError):
    pass


class NotSymmetric(SymRigidError):
    pass


class SpanDeficient(SymRigidError):
    """Trivial motions span less than C(d+1, 2) dimensions.

    ``basis`` carries the kernel of the complete-graph matrix, which is
    used as the trivial space in that regime.
    """

    def __init__(self, message, basis=None):
        super().__init__(message)
        self.basis = basis


class UnrealizableFixedVertex(SymRigidError):
    pass


class EquatorMismatch(SymRigidError):
    pass


class NotOrbitClosed(SymRigidError):
    pass


class NotOrthogonal(SymRigidError):
    pass


class FixedVertexOffMirror(SymRigidError):
    pass
