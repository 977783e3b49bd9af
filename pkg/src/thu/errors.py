"""Error hierarchy shared by every layer of the kernel.

Each error class carries a machine-readable ``code`` (the class name) so the
command-line driver can report it verbatim.
"""


class KernelError(Exception):
    """Base class; ``code`` is stable and used in CLI reports."""

    @property
    def code(self) -> str:
        return type(self).__name__


# signature store
class DuplicateConstant(KernelError): ...
class OpenType(KernelError): ...
class UnknownConstant(KernelError): ...
class BadLhsShape(KernelError): ...
class EscapedVariable(KernelError): ...
class OutsideSignature(KernelError): ...
class UnknownCluster(KernelError): ...


# rewriting
class UnsupportedPattern(KernelError): ...
class FuelExhausted(KernelError): ...


# typing
class IllFormedContext(KernelError):
    def __init__(self, position: int, cause: Exception):
        super().__init__(f"declaration #{position}: {cause}")
        self.position = position
        self.cause = cause


class UnknownVariable(KernelError): ...
class NotAFunction(KernelError): ...
class DomainMismatch(KernelError): ...
class UntypableSort(KernelError): ...
class IllFormedDomain(KernelError): ...
class NotASort(KernelError): ...
class TypeMismatch(KernelError): ...
class MissingAnnotation(KernelError): ...
class DaggerInUserTerm(KernelError): ...


# catalog / fragments
class UnknownSubTheory(KernelError): ...
class OutsideFragment(KernelError): ...
class ReCheckFailed(KernelError): ...


# encoders
class DuplicateSymbol(KernelError): ...
class UnknownSymbol(KernelError): ...
class ArityMismatch(KernelError): ...
class NonFunctionalSpec(KernelError): ...


class ParseError(KernelError):
    """Surface syntax error; reported with its code ``SyntaxError``."""

    def __init__(self, line: int, column: int, expectation: str):
        super().__init__(f"{line}:{column}: expected {expectation}")
        self.line = line
        self.column = column
        self.expectation = expectation

    @property
    def code(self) -> str:
        return "SyntaxError"
