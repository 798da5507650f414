import logging
from typing import List, Any

from mcp.types import Tool, Resource

from ..base import Feature
from .. import schemas
from ...models.requests import FisherRequest
from ...reports import fisher_report

logger = logging.getLogger(__name__)

class FisherFeature(Feature):
    """Fisher randomization test of the sharp null of no effect"""
    
    def get_tools(self) -> List[Tool]:
        return [
            Tool(
                name="fisher.test",
                description="Exact (and optionally Monte Carlo) Fisher randomization test for an observed 2x2 table",
                inputSchema={
                    "type": "object",
                    "properties": {
                        "table": schemas.TABLE,
                        "monte_carlo": {
                            "type": "integer",
                            "minimum": 0,
                            "description": "Number of Monte Carlo draws; 0 for exact only"
                        },
                        "two_sided": {"type": "string", "enum": ["absolute", "pmf"]},
                        "full_enumeration": {
                            "type": "boolean",
                            "default": False,
                            "description": "Also enumerate every randomization of the sharp-null table"
                        },
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
        if name == "fisher.test":
            return await self._test(arguments)
        else:
            raise ValueError(f"Unknown tool: {name}")
    
    async def handle_resource_request(self, uri: str) -> Any:
        raise ValueError(f"Unknown resource URI: {uri}")
    
    async def _test(self, arguments: dict) -> str:
        def build() -> dict:
            request = FisherRequest(**{"seed": self.settings.seed, **arguments})
            return fisher_report(request, request.seed, self.settings.enumeration_cap)
        
        return await self.run_report("fisher.test", build)
