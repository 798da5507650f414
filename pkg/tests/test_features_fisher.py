"""
Tests for Fisher feature
"""
import dataclasses

import pytest
import json

from src.features.fisher.feature import FisherFeature


class TestFisherFeature:
    """Test FisherFeature"""
    
    @pytest.fixture
    def feature(self, settings):
        """Create Fisher feature for testing"""
        return FisherFeature(settings)
    
    def test_get_tools(self, feature):
        """Test getting tools from Fisher feature"""
        tools = feature.get_tools()
        
        assert [t.name for t in tools] == ["fisher.test"]
        assert feature.get_resources() == []
    
    @pytest.mark.asyncio
    async def test_exact(self, feature):
        """Perfect separation on 10 units"""
        data = json.loads(await feature.handle_tool_call("fisher.test", {"table": [5, 0, 0, 5]}))
        
        assert data["exact"]["p_two_sided"] == pytest.approx(2 / 252)
        assert data["exact"]["two_sided"] == "absolute"
    
    @pytest.mark.asyncio
    async def test_monte_carlo(self, feature, settings):
        """Monte Carlo p-value with the default seed"""
        data = json.loads(await feature.handle_tool_call(
            "fisher.test", {"table": [15, 5, 5, 15], "monte_carlo": 2000}
        ))
        
        assert data["seed"] == settings.seed
        assert data["monte_carlo"]["p_two_sided"] == pytest.approx(data["exact"]["p_two_sided"], abs=0.01)
    
    @pytest.mark.asyncio
    async def test_bad_convention(self, feature):
        """Only absolute and pmf conventions exist"""
        data = json.loads(await feature.handle_tool_call(
            "fisher.test", {"table": [5, 0, 0, 5], "two_sided": "doubled"}
        ))
        
        assert data["error_code"] == "INVALID_ARGUMENT"
    
    @pytest.mark.asyncio
    async def test_handle_unknown_tool(self, feature):
        """Test handling unknown tool"""
        with pytest.raises(ValueError, match="Unknown tool"):
            await feature.handle_tool_call("unknown.tool", {})
    
    @pytest.mark.asyncio
    async def test_full_enumeration(self, feature):
        """Enumerated p-value agrees with the hypergeometric one"""
        data = json.loads(await feature.handle_tool_call(
            "fisher.test", {"table": [15, 5, 5, 15], "full_enumeration": True}
        ))
        
        assert data["enumerated_p_two_sided"] == pytest.approx(data["exact"]["p_two_sided"], rel=1e-12)
    
    @pytest.mark.asyncio
    async def test_enumeration_cap(self, settings):
        """The configured cap bounds full enumeration"""
        feature = FisherFeature(dataclasses.replace(settings, enumeration_cap=10))
        
        data = json.loads(await feature.handle_tool_call(
            "fisher.test", {"table": [15, 5, 5, 15], "full_enumeration": True}
        ))
        
        assert data["error_code"] == "ENUMERATION_TOO_LARGE"
        assert data["details"] == {"assignments": 21, "cap": 10}
