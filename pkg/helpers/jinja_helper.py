import os
from typing import Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

from helpers.exactq import format_decimal, format_rational

TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), "..", "templates")


def _rational(value) -> str:
    return "" if value is None else format_rational(value)


def _approx(value) -> str:
    return "" if value is None else f"~{format_decimal(value)}"


def process_template(template_file: str, data: dict[str, Any]) -> str:
    jinja_env = Environment(
        loader=FileSystemLoader(searchpath=TEMPLATE_DIR),
        autoescape=select_autoescape(),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
    )
    jinja_env.filters["rational"] = _rational
    jinja_env.filters["approx"] = _approx
    template = jinja_env.get_template(template_file)
    return template.render(**data)
