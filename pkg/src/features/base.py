import asyncio
import json
import logging
from abc import ABC, abstractmethod
from typing import Callable, List, Any

from mcp.types import Tool, Resource
from pydantic import ValidationError

from ..config import Settings
from ..exceptions import PotTabError
from ..reports import clean

logger = logging.getLogger(__name__)

class Feature(ABC):
    """Base class for all feature modules"""
    
    def __init__(self, settings: Settings):
        self.settings = settings
    
    @abstractmethod
    def get_tools(self) -> List[Tool]:
        """Return list of MCP tools provided by this feature"""
        pass
    
    @abstractmethod
    def get_resources(self) -> List[Resource]:
        """Return list of MCP resources provided by this feature"""
        pass
    
    @abstractmethod
    async def handle_tool_call(self, name: str, arguments: dict) -> Any:
        """Handle tool call for this feature"""
        pass
    
    @abstractmethod
    async def handle_resource_request(self, uri: str) -> Any:
        """Handle resource request for this feature"""
        pass
    
    async def run_report(self, what: str, build: Callable[[], dict]) -> str:
        """Run a CPU-bound report builder off the event loop and serialize the outcome"""
        try:
            result = await asyncio.to_thread(build)
            logger.info(f"Completed {what}")
            return json.dumps(clean(result), indent=2)
        except ValidationError as e:
            logger.error(f"Invalid arguments for {what}: {e}")
            return json.dumps({"error": str(e), "error_code": "INVALID_ARGUMENT"})
        except PotTabError as e:
            logger.error(f"Error in {what}: {e}")
            return json.dumps({"error": e.message, "error_code": e.error_code, "details": clean(e.details)}, default=str)
        except Exception as e:
            logger.error(f"Unexpected error in {what}: {e}")
            return json.dumps({"error": str(e)})
