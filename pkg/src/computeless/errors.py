class ConfigError(ValueError):
    """Invalid configuration value. ``field`` is the dotted name of the offending key."""

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class UsageError(ValueError):
    """An operation was called outside its preconditions."""
