import logging
from typing import List, Any

from mcp.types import Tool, Resource

from ..base import Feature
from .. import schemas
from ...models.requests import SensitivityRequest
from ...reports import sensitivity_report

logger = logging.getLogger(__name__)

class SensitivityFeature(Feature):
    """Posterior credible intervals across the association parameter gamma"""
    
    def get_tools(self) -> List[Tool]:
        return [
            Tool(
                name="sensitivity.grid",
                description=(
                    "Bayesian sensitivity analysis: credible intervals over a grid of log(gamma), "
                    "where gamma is the odds ratio between the two potential outcomes"
                ),
                inputSchema={
                    "type": "object",
                    "properties": {
                        "table": schemas.TABLE,
                        "measures": {
                            "type": "array",
                            "items": {"type": "string", "enum": ["crd", "log_crr", "log_cor"]}
                        },
                        "log_gamma_min": {"type": "number", "default": -2},
                        "log_gamma_max": {"type": "number", "default": 4},
                        "points": {"type": "integer", "minimum": 1, "default": 31},
                        "level": schemas.LEVEL,
                        "prior": schemas.PRIOR,
                        "n_draws": {"type": "integer", "minimum": 1},
                        "seed": schemas.SEED
                    },
                    "required": ["table"],
                    "additionalProperties": False
                }
            )
        ]
    
    def get_resources(self) -> List[Resource]:
        return []
    
    async def handle_tool_call(self, name: str, arguments: dict) -> Any:
        if name == "sensitivity.grid":
            return await self._grid(arguments)
        else:
            raise ValueError(f"Unknown tool: {name}")
    
    async def handle_resource_request(self, uri: str) -> Any:
        raise ValueError(f"Unknown resource URI: {uri}")
    
    async def _grid(self, arguments: dict) -> str:
        def build() -> dict:
            payload = {"n_draws": self.settings.bayes_draws, "seed": self.settings.seed, **arguments}
            request = SensitivityRequest(**payload)
            return sensitivity_report(request, request.seed, self.settings.threads)
        
        return await self.run_report("sensitivity.grid", build)
