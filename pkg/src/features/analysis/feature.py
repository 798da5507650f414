import logging
from typing import List, Any

from mcp.types import Tool, Resource

from ..base import Feature
from .. import schemas
from ...models.requests import AnalysisRequest
from ...reports import analysis_report

logger = logging.getLogger(__name__)

class AnalysisFeature(Feature):
    """Full analysis of one observed table"""
    
    def get_tools(self) -> List[Tool]:
        return [
            Tool(
                name="analysis.analyze",
                description=(
                    "Fisher exact test, Neymanian and improved intervals and Bayesian posteriors "
                    "for the causal risk difference, log risk ratio and log odds ratio"
                ),
                inputSchema={
                    "type": "object",
                    "properties": {
                        "table": schemas.TABLE,
                        "level": schemas.LEVEL,
                        "methods": schemas.METHODS,
                        "prior": schemas.PRIOR,
                        "n_draws": {"type": "integer", "minimum": 1},
                        "seed": schemas.SEED,
                        "haldane": {"type": "boolean", "default": False},
                        "clip": {"type": "boolean", "default": False},
                        "exact_denominators": {"type": "boolean", "default": False},
                        "credible": {"type": "string", "enum": ["equal_tailed", "hpd"]}
                    },
                    "required": ["table"],
                    "additionalProperties": False
                }
            )
        ]
    
    def get_resources(self) -> List[Resource]:
        return []
    
    async def handle_tool_call(self, name: str, arguments: dict) -> Any:
        if name == "analysis.analyze":
            return await self._analyze(arguments)
        else:
            raise ValueError(f"Unknown tool: {name}")
    
    async def handle_resource_request(self, uri: str) -> Any:
        raise ValueError(f"Unknown resource URI: {uri}")
    
    async def _analyze(self, arguments: dict) -> str:
        def build() -> dict:
            payload = {"n_draws": self.settings.bayes_draws, "seed": self.settings.seed, **arguments}
            request = AnalysisRequest(**payload)
            return analysis_report(request, request.seed)
        
        return await self.run_report("analysis.analyze", build)
