"""
Tests for analysis feature
"""
import pytest
import json

from mcp.types import Tool

from src.features.analysis.feature import AnalysisFeature


class TestAnalysisFeature:
    """Test AnalysisFeature"""
    
    @pytest.fixture
    def feature(self, settings):
        """Create analysis feature for testing"""
        return AnalysisFeature(settings)
    
    def test_get_tools(self, feature):
        """Test getting tools from analysis feature"""
        tools = feature.get_tools()
        
        assert len(tools) == 1
        tool = tools[0]
        assert isinstance(tool, Tool)
        assert tool.name == "analysis.analyze"
        assert tool.inputSchema["required"] == ["table"]
        assert tool.inputSchema["additionalProperties"] is False
    
    def test_get_resources(self, feature):
        """No resources"""
        assert feature.get_resources() == []
    
    @pytest.mark.asyncio
    async def test_analyze_worked_example(self, feature, settings):
        """Settings supply the seed and draw count"""
        result = await feature.handle_tool_call("analysis.analyze", {"table": [15, 5, 5, 15]})
        data = json.loads(result)
        
        assert data["seed"] == settings.seed
        assert data["n_draws"] == settings.bayes_draws
        assert data["measures"]["crd"]["variances"]["neyman"] == pytest.approx(0.0197368, abs=1e-6)
        assert data["measures"]["crd"]["variances"]["improved"] == pytest.approx(0.0133266, abs=1e-6)
        assert "bayes" in data["measures"]["log_cor"]
    
    @pytest.mark.asyncio
    async def test_analyze_same_seed_same_report(self, feature):
        """Posterior summaries repeat under a fixed seed"""
        arguments = {"table": "19,60,12,27", "seed": 11, "n_draws": 500}
        
        first = await feature.handle_tool_call("analysis.analyze", arguments)
        second = await feature.handle_tool_call("analysis.analyze", arguments)
        
        assert first == second
    
    @pytest.mark.asyncio
    async def test_analyze_variance_undefined(self, feature):
        """Domain errors are returned with their code"""
        data = json.loads(await feature.handle_tool_call("analysis.analyze", {"table": [1, 0, 0, 1]}))
        
        assert data["error_code"] == "VARIANCE_UNDEFINED"
    
    @pytest.mark.asyncio
    async def test_analyze_unknown_method(self, feature):
        """Unknown methods are rejected"""
        data = json.loads(await feature.handle_tool_call(
            "analysis.analyze", {"table": [15, 5, 5, 15], "methods": ["wald"]}
        ))
        
        assert "error" in data
    
    @pytest.mark.asyncio
    async def test_handle_unknown_tool(self, feature):
        """Test handling unknown tool"""
        with pytest.raises(ValueError, match="Unknown tool"):
            await feature.handle_tool_call("unknown.tool", {})
    
    @pytest.mark.asyncio
    async def test_handle_resource_request(self, feature):
        """Test resource request raises error"""
        with pytest.raises(ValueError, match="Unknown resource URI"):
            await feature.handle_resource_request("pottab://anything")
