"""Exception hierarchy shared by all emoarc modules."""


class EmoArcError(Exception):
    """Base class; ``category`` names the CLI exit bucket."""

    category = "error"


class FormatError(EmoArcError, ValueError):
    """A file row or value does not match the declared layout."""

    category = "format"


class DegenerateArcError(EmoArcError, ValueError):
    """An arc is too short or constant for standardization or rank correlation."""

    category = "degenerate-arc"


class EmptyWindowError(EmoArcError, ValueError):
    """Some window has no scorable content."""

    category = "empty-window"
