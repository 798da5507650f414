import json
import logging
from typing import List, Any

from mcp.types import Tool, Resource

from ..base import Feature
from .. import schemas
from ...models.requests import SimulationRequest, StudyRequest
from ...reports import simulation_report, study_report
from ...simulation import STUDY_CASES, STUDIES

logger = logging.getLogger(__name__)

STUDIES_URI = "pottab://studies"

class SimulationFeature(Feature):
    """Repeated-sampling simulation of the interval procedures"""
    
    def get_tools(self) -> List[Tool]:
        common = {
            "reps": {"type": "integer", "minimum": 1, "default": 5000},
            "methods": schemas.METHODS,
            "level": schemas.LEVEL,
            "prior": schemas.PRIOR,
            "n_draws": {"type": "integer", "minimum": 1},
            "seed": schemas.SEED
        }
        return [
            Tool(
                name="simulation.run",
                description="Bias, interval length and coverage over randomizations of a science table",
                inputSchema={
                    "type": "object",
                    "properties": {
                        "science": {
                            **schemas.TABLE,
                            "description": "Science-table counts [N11, N10, N01, N00]"
                        },
                        "n1": {"type": "integer", "minimum": 1, "description": "Units assigned to treatment"},
                        **common
                    },
                    "required": ["science", "n1"],
                    "additionalProperties": False
                }
            ),
            Tool(
                name="simulation.study",
                description="Run one of the catalogued simulation studies (see pottab://studies)",
                inputSchema={
                    "type": "object",
                    "properties": {
                        "study": {"type": "string", "enum": sorted(STUDIES)},
                        **common
                    },
                    "required": ["study"],
                    "additionalProperties": False
                }
            )
        ]
    
    def get_resources(self) -> List[Resource]:
        return [
            Resource(
                uri=STUDIES_URI,
                name="Simulation studies",
                description="Catalogued studies with their science tables and default methods",
                mimeType="application/json"
            )
        ]
    
    async def handle_tool_call(self, name: str, arguments: dict) -> Any:
        if name == "simulation.run":
            return await self._run(arguments)
        elif name == "simulation.study":
            return await self._study(arguments)
        else:
            raise ValueError(f"Unknown tool: {name}")
    
    async def handle_resource_request(self, uri: str) -> Any:
        if uri == STUDIES_URI:
            return self._studies()
        raise ValueError(f"Unknown resource URI: {uri}")
    
    def _payload(self, arguments: dict) -> dict:
        return {"n_draws": self.settings.sim_bayes_draws, "seed": self.settings.seed, **arguments}
    
    async def _run(self, arguments: dict) -> str:
        def build() -> dict:
            request = SimulationRequest(**self._payload(arguments))
            return simulation_report(request, request.seed, self.settings.threads).to_dict()
        
        return await self.run_report("simulation.run", build)
    
    async def _study(self, arguments: dict) -> str:
        def build() -> dict:
            request = StudyRequest(**self._payload(arguments))
            return study_report(request, request.seed, self.settings.threads).to_dict()
        
        return await self.run_report("simulation.study", build)
    
    def _studies(self) -> str:
        result = {
            study_id: {
                "description": description,
                "methods": list(methods),
                "cases": {label: STUDY_CASES[label].to_dict() for label in labels}
            }
            for study_id, (description, labels, methods) in STUDIES.items()
        }
        return json.dumps(result, indent=2)
