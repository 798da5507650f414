"""
Tests for base feature class
"""
import json

import pytest
from abc import ABC

from src.exceptions import VarianceUndefinedError
from src.features.base import Feature
from src.models.requests import AnalysisRequest


class ConcreteFeature(Feature):
    def get_tools(self):
        return []
    
    def get_resources(self):
        return []
    
    async def handle_tool_call(self, name, arguments):
        return f"Tool: {name}"
    
    async def handle_resource_request(self, uri):
        return f"Resource: {uri}"


class TestFeatureBase:
    """Test Feature base class"""
    
    def test_feature_is_abstract(self, settings):
        """Test that Feature is an abstract base class"""
        assert issubclass(Feature, ABC)
        
        with pytest.raises(TypeError):
            Feature(settings)
    
    def test_feature_abstract_methods(self):
        """Test that Feature has required abstract methods"""
        assert Feature.__abstractmethods__ == {
            'get_tools',
            'get_resources',
            'handle_tool_call',
            'handle_resource_request'
        }
    
    @pytest.mark.asyncio
    async def test_concrete_feature_implementation(self, settings):
        """Test that concrete implementation works"""
        feature = ConcreteFeature(settings)
        
        assert feature.settings is settings
        assert feature.get_tools() == []
        assert await feature.handle_tool_call("x", {}) == "Tool: x"
        assert await feature.handle_resource_request("y://") == "Resource: y://"


class TestRunReport:
    """Test report execution and error mapping"""
    
    @pytest.fixture
    def feature(self, settings):
        return ConcreteFeature(settings)
    
    @pytest.mark.asyncio
    async def test_success_is_clean_json(self, feature):
        """Non-finite values serialize as null"""
        result = await feature.run_report("test", lambda: {"value": float("nan"), "n": 3})
        
        assert json.loads(result) == {"value": None, "n": 3}
    
    @pytest.mark.asyncio
    async def test_validation_error(self, feature):
        """Pydantic failures map to INVALID_ARGUMENT"""
        result = json.loads(await feature.run_report("test", lambda: AnalysisRequest(table=[1, 2, 3, 4], level=2)))
        
        assert result["error_code"] == "INVALID_ARGUMENT"
    
    @pytest.mark.asyncio
    async def test_domain_error(self, feature):
        """Package errors keep their code and details"""
        def build():
            raise VarianceUndefinedError("N1 < 2", "VARIANCE_UNDEFINED", {"n1": 1})
        
        result = json.loads(await feature.run_report("test", build))
        
        assert result == {"error": "N1 < 2", "error_code": "VARIANCE_UNDEFINED", "details": {"n1": 1}}
    
    @pytest.mark.asyncio
    async def test_unexpected_error(self, feature):
        """Anything else is reported by message"""
        def build():
            raise RuntimeError("boom")
        
        assert json.loads(await feature.run_report("test", build)) == {"error": "boom"}
