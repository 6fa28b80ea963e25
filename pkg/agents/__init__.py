# Each agent module exposes register(mcp), which attaches its tools to the server
from .assigner import register as register_assigner
from .auditor import register as register_auditor
from .analyst import register as register_analyst
