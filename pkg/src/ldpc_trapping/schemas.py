"""JSON Schemas (draft 2020-12) for every CLI report."""

from __future__ import annotations

_INT_LIST = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_INT_OR_NULL = {"type": ["integer", "null"]}

_STATE_CYCLE = {
    "type": "object",
    "required": ["transientLength", "cycleLength", "periodicSupports", "firstCodewordIteration"],
    "properties": {
        "transientLength": {"type": "integer", "minimum": 0},
        "cycleLength": {"type": "integer", "minimum": 1},
        "periodicSupports": {"type": "array", "items": _INT_LIST},
        "firstCodewordIteration": _INT_OR_NULL,
    },
}

_VERDICT_PROPS = {
    "T": _INT_LIST,
    "E": _INT_LIST,
    "O": _INT_LIST,
    "C": {"type": "integer", "minimum": 0},
    "evenCount": {"type": "integer", "minimum": 0},
    "isTrapping": {"type": "boolean"},
    "violations": {
        "type": "array",
        "items": {
            "type": "object",
            "required": ["condition", "variable"],
            "properties": {
                "condition": {"enum": ["a", "b"]},
                "variable": {"type": "integer"},
                "checks": _INT_LIST,
            },
        },
    },
    "note": {"type": "string"},
}

_VERDICT = {
    "type": "object",
    "required": ["T", "E", "O", "C", "evenCount", "isTrapping", "violations"],
    "properties": _VERDICT_PROPS,
}

_GUARANTEED = {
    "type": "object",
    "required": ["girth", "lemmaUsed", "caseLabel", "confirmed", "size", "confirmedBy", "candidates", "note"],
    "properties": {
        "girth": {"oneOf": [{"type": "integer", "minimum": 2}, {"const": "acyclic"}]},
        "lemmaUsed": {"type": ["string", "null"]},
        "caseLabel": {"type": ["string", "null"]},
        "confirmed": {"oneOf": [_INT_LIST, {"type": "null"}]},
        "size": _INT_OR_NULL,
        "confirmedBy": {"type": "array", "items": {"enum": ["gallager-a", "bit-flip"]}},
        "isTrapping": {"type": ["boolean", "null"]},
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["T", "caseLabel"],
                "properties": {"T": _INT_LIST, "caseLabel": {"type": "string"}},
            },
        },
        "note": {"type": "string"},
    },
}

_CONFIG = {
    "type": "object",
    "required": ["max_iterations", "algorithm", "decision_rule"],
    "properties": {
        "max_iterations": {"type": "integer", "minimum": 1},
        "algorithm": {"enum": ["gallager-a", "bit-flip"]},
        "decision_rule": {"enum": ["A", "B"]},
    },
}

SCHEMAS: dict[str, dict] = {
    "girth": {
        "type": "object",
        "required": ["girth", "witness"],
        "properties": {
            "girth": {"oneOf": [{"type": "integer", "minimum": 2, "multipleOf": 2}, {"const": "acyclic"}]},
            "witness": {"type": "array", "items": {"type": "string", "pattern": "^[vc][0-9]+$"}},
        },
    },
    "decode": {
        "type": "object",
        "required": ["config", "input", "status", "output", "support", "iterationsRun", "failure"],
        "properties": {
            "config": _CONFIG,
            "input": _INT_LIST,
            "status": {"enum": ["codeword-found", "max-iter-reached"]},
            "output": {"type": "array", "items": {"enum": [0, 1]}},
            "support": _INT_LIST,
            "iterationsRun": {"type": "integer", "minimum": 0},
            "failure": {"type": "boolean"},
            "unanalyzed": {"type": "boolean"},
        },
    },
    "check-ts": _VERDICT,
    "find-failures": {
        "type": "object",
        "required": ["kMax", "algorithm", "tested", "exhaustive", "minFailingWeight", "failingSupports"],
        "properties": {
            "kMax": {"type": "integer", "minimum": 1},
            "algorithm": {"enum": ["gallager-a", "bit-flip"]},
            "tested": {"type": "integer", "minimum": 0},
            "exhaustive": {"type": "boolean"},
            "minFailingWeight": _INT_OR_NULL,
            "failingSupports": {"type": "array", "items": _INT_LIST},
        },
    },
    "critical-number": {
        "type": "object",
        "required": ["T", "isTrapping", "criticalNumber", "witness", "subsetsTested", "restrictedToT"],
        "properties": {
            **_VERDICT_PROPS,
            "criticalNumber": _INT_OR_NULL,
            "witness": {"oneOf": [_INT_LIST, {"type": "null"}]},
            "subsetsTested": {"type": "integer", "minimum": 0},
            "restrictedToT": {"type": "boolean"},
            "algorithm": {"enum": ["gallager-a", "bit-flip"]},
            "certificate": _STATE_CYCLE,
        },
    },
    "guaranteed-failure": {
        "type": "object",
        "required": ["report"],
        "properties": {
            "report": _GUARANTEED,
            "shortCycleClaim": {
                "type": "object",
                "required": ["k", "girth", "result", "witness", "regimeWarning"],
                "properties": {
                    "k": {"type": "integer"},
                    "result": {"enum": ["witness", "no short cycle"]},
                    "witness": {"oneOf": [_INT_LIST, {"type": "null"}]},
                    "regimeWarning": {"type": ["string", "null"]},
                },
            },
        },
    },
    "bounds": {
        "type": "object",
        "required": ["rho"],
        "properties": {
            "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "rho": {"type": "integer", "minimum": 4},
            "N": {"type": "integer", "minimum": 2},
            "bound_at_N": {"type": "number"},
            "boundCurve": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["n", "bound"],
                    "properties": {"n": {"type": "integer"}, "bound": {"type": "number"}},
                },
            },
            "n": {"type": "integer", "minimum": 2},
            "girthUpperBound": {"type": "number"},
        },
    },
    "sample-ensemble": {
        "type": "object",
        "required": ["n", "rho", "seed", "method", "graphs"],
        "properties": {
            "n": {"type": "integer"},
            "rho": {"type": "integer"},
            "seed": {"type": "integer"},
            "method": {"enum": ["configuration-model", "peg"]},
            "graphs": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["seed", "m", "girth", "hasParallelEdges", "alist"],
                    "properties": {
                        "seed": {"type": "integer"},
                        "m": {"type": "integer"},
                        "girth": {"oneOf": [{"type": "integer"}, {"const": "acyclic"}]},
                        "hasParallelEdges": {"type": "boolean"},
                        "alist": {"type": "string"},
                    },
                },
            },
        },
    },
    "gadget": {
        "type": "object",
        "required": ["gadget"],
        "properties": {
            "gadget": {
                "type": "object",
                "required": ["name", "nVars", "nChecks", "edges", "designated_T", "girthFloor", "isTrapping"],
            },
            "completion": {
                "type": "object",
                "required": ["n", "m", "rho", "seed", "girth", "verdict", "alist"],
                "properties": {"verdict": _VERDICT, "alist": {"type": "string"}},
            },
        },
    },
    "simulate": {
        "type": "object",
        "required": ["config", "seed", "p", "trials", "frameErrors", "bitErrors", "fer", "ber", "ferCI", "berCI"],
        "properties": {
            "config": _CONFIG,
            "seed": {"type": "integer"},
            "p": {"type": "number", "minimum": 0, "maximum": 0.5},
            "trials": {"type": "integer", "minimum": 1},
            "frameErrors": {"type": "integer", "minimum": 0},
            "bitErrors": {"type": "integer", "minimum": 0},
            "fer": {"type": "number", "minimum": 0, "maximum": 1},
            "ber": {"type": "number", "minimum": 0, "maximum": 1},
            "ferCI": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            "berCI": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            "failureSupports": {"type": "array", "items": _INT_LIST},
        },
    },
    "verify": {
        "type": "object",
        "required": ["passed", "criteria"],
        "properties": {
            "passed": {"type": "boolean"},
            "criteria": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["number", "title", "passed", "detail"],
                    "properties": {
                        "number": {"type": "integer"},
                        "title": {"type": "string"},
                        "passed": {"type": "boolean"},
                        "detail": {"type": "string"},
                    },
                },
            },
        },
    },
}

ERROR_SCHEMA = {
    "type": "object",
    "required": ["error", "kind"],
    "properties": {"error": {"type": "string"}, "kind": {"enum": ["input", "analysis"]}},
}
