class InputError(ValueError):
    """Invalid user input: malformed presentation, bad parameters, violated preconditions."""
