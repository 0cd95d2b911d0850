from .definition import ClassDefinition, parse_definition, parse_definition_text
from .generator import extract_regions, generate, output_paths, regenerate, snake
