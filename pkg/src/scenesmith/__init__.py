"""scenesmith: prompt-driven construction of interactive 3D scenes.

A planner / scene-analyzer / builder / inspector pipeline over a
deterministic scene runtime and a small scripting language, plus asset
retrieval, persistence, an evaluation harness, and an HTTP service.
"""

__version__ = "0.1.0"
