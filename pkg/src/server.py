import asyncio
import logging
from typing import List, Dict, Optional

from mcp.server import Server
from mcp.types import Tool, Resource, TextContent
from mcp.server.stdio import stdio_server

from .config import Settings, configure_logging, load_settings
from .features.base import Feature
from .features.analysis.feature import AnalysisFeature
from .features.fisher.feature import FisherFeature
from .features.sensitivity.feature import SensitivityFeature
from .features.simulation.feature import SimulationFeature

logger = logging.getLogger(__name__)

class PotTabMCPServer:
    """MCP server exposing the 2x2 table analyses as tools"""
    
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or load_settings()
        self.server = Server("pottab-mcp-server")
        self.features: List[Feature] = []
        self.tool_handlers: Dict[str, Feature] = {}
        self.resource_handlers: Dict[str, Feature] = {}
        
    def load_features(self) -> List[Feature]:
        """Load and initialize all feature modules"""
        features = [
            AnalysisFeature(self.settings),
            FisherFeature(self.settings),
            SensitivityFeature(self.settings),
            SimulationFeature(self.settings),
        ]
        
        logger.info(f"Loaded {len(features)} features")
        return features
    
    async def setup(self):
        """Initialize server and register features"""
        try:
            self.features = self.load_features()
            
            all_tools = []
            all_resources = []
            
            for feature in self.features:
                tools = feature.get_tools()
                resources = feature.get_resources()
                
                all_tools.extend(tools)
                all_resources.extend(resources)
                
                for tool in tools:
                    self.tool_handlers[tool.name] = feature
                
                for resource in resources:
                    self.resource_handlers[str(resource.uri)] = feature
            
            @self.server.call_tool()
            async def handle_tool_call(name: str, arguments: dict) -> List[TextContent]:
                return [TextContent(type="text", text=await self.dispatch_tool(name, arguments))]
            
            @self.server.read_resource()
            async def handle_resource_request(uri) -> str:
                return await self.dispatch_resource(str(uri))
            
            @self.server.list_tools()
            async def list_tools() -> List[Tool]:
                return all_tools
            
            @self.server.list_resources()
            async def list_resources() -> List[Resource]:
                return all_resources
            
            logger.info(f"Server setup complete - {len(all_tools)} tools, {len(all_resources)} resources")
            
        except Exception as e:
            logger.error(f"Error during server setup: {e}")
            raise
    
    async def dispatch_tool(self, name: str, arguments: dict) -> str:
        try:
            if name in self.tool_handlers:
                result = await self.tool_handlers[name].handle_tool_call(name, arguments or {})
                return str(result)
            return f"Unknown tool: {name}"
        except Exception as e:
            logger.error(f"Error handling tool call {name}: {e}")
            return f"Error: {str(e)}"
    
    async def dispatch_resource(self, uri: str) -> str:
        try:
            if uri in self.resource_handlers:
                result = await self.resource_handlers[uri].handle_resource_request(uri)
                return str(result)
            return f"Unknown resource: {uri}"
        except Exception as e:
            logger.error(f"Error handling resource request {uri}: {e}")
            return f"Error: {str(e)}"
    
    async def run(self):
        """Run the MCP server over stdio"""
        try:
            await self.setup()
            
            async with stdio_server() as (read_stream, write_stream):
                await self.server.run(
                    read_stream, write_stream, self.server.create_initialization_options()
                )
                
        except Exception as e:
            logger.error(f"Server error: {e}")
            raise

async def main(settings: Optional[Settings] = None):
    """Main entry point"""
    settings = settings or load_settings()
    configure_logging(settings.log_level)
    server = PotTabMCPServer(settings)
    await server.run()

if __name__ == "__main__":
    asyncio.run(main())
