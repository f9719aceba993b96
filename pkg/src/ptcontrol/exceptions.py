"""Exception types raised across the package."""


class DomainError(ValueError):
    """A function was evaluated outside the set where it is defined."""


class InconclusiveError(RuntimeError):
    """A numerical classification could not reach a reliable verdict."""


class IntegrationError(ValueError):
    """Bad integration settings, or a trajectory unusable for an analysis."""


class ScenarioError(Exception):
    """Scenario file problem. ``category`` is ``"parse"`` or ``"validation"``."""

    def __init__(self, message, category="validation"):
        super().__init__(message)
        self.category = category
