class ConfigurationError(ValueError):
    """Invalid settings, detected before generation 0.

    ``key`` names the offending setting (a dotted config path when the error
    comes from a config file).
    """

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        self.message = message
        super().__init__(f"{key}: {message}" if key else message)
