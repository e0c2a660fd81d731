"""JSON schemas for the serialized forms and CLI outputs."""

import json
from importlib import resources

NAMES = ("poly", "polyx", "family", "moment", "polys", "report", "const")


def load(name: str) -> dict:
    return json.loads(resources.files(__name__).joinpath(f"{name}.schema.json").read_text("utf-8"))


def registry():
    """A referencing registry holding every schema under its file name."""
    from referencing import Registry, Resource

    return Registry().with_resources(
        (f"{n}.schema.json", Resource.from_contents(load(n))) for n in NAMES
    )


def validator(name: str):
    import jsonschema

    schema = load(name)
    cls = jsonschema.validators.validator_for(schema)
    return cls(schema, registry=registry())
