"""
JSON-schema fragments shared by the tool definitions
"""
TABLE = {
    "type": "array",
    "items": {"type": "integer", "minimum": 0},
    "minItems": 4,
    "maxItems": 4,
    "description": "Observed counts [n11, n10, n01, n00]"
}

PRIOR = {
    "type": "object",
    "properties": {
        "alpha1": {"type": "number", "exclusiveMinimum": 0},
        "beta1": {"type": "number", "exclusiveMinimum": 0},
        "alpha0": {"type": "number", "exclusiveMinimum": 0},
        "beta0": {"type": "number", "exclusiveMinimum": 0}
    },
    "additionalProperties": False,
    "description": "Beta(alpha1, beta1) on p1 and Beta(alpha0, beta0) on p0; default all 1"
}

LEVEL = {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 0.95}

SEED = {"type": "integer", "minimum": 0, "description": "RNG seed; defaults to POTTAB_SEED"}

METHODS = {
    "type": "array",
    "items": {"type": "string", "enum": ["neyman", "improved", "binomial", "bayes"]}
}
