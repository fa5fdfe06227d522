from deformed_vibrations import constants


def format_number(value: float) -> str:
    """Format a float with the fixed output precision, never as ``-0``."""
    text = f"{value + 0.0:.{constants.OUTPUT_SIGNIFICANT_DIGITS}g}"
    return "0" if text == "-0" else text


def round_significant(value: float) -> float:
    """Round to the output precision, for JSON payloads."""
    return float(format_number(value))


def pair_name(prefix: str, first: int, second: int) -> str:
    """Parameter name of a mode-pair constant, e.g. ``gamma_1_2``."""
    return f"{prefix}_{first}_{second}"
