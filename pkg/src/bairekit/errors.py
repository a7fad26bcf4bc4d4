"""Exception vocabulary shared by all modules."""


class BairekitError(Exception):
    """Base class for all workbench errors."""


class ScaleGuard(BairekitError):
    """A requested computation exceeds the configured desk-scale caps."""


class ExtensionCap(BairekitError):
    """A locally computed extension did not terminate within the probe cap."""


class NonTermination(BairekitError):
    """A strategy whose termination depends on an external hypothesis ran past
    its cap; the hypothesis is presumed violated."""


class MalformedCircuit(BairekitError):
    """A circuit gate references a wire that does not precede it."""


class EmptySet(BairekitError):
    """Majority vote requested over an empty circuit set."""


class ExtensionOverflow(BairekitError):
    """A strategy extension does not fit inside its diagonal block."""


class PlayerIIStalled(BairekitError):
    """Player II returned an empty extension; game play requires strictness."""


class ConfigError(BairekitError):
    """An experiment configuration failed validation."""
