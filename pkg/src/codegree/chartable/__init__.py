"""Exact character tables over a Dixon prime, with kernels and codegrees."""

from .dixon import (
    CharacterTable,
    ClassConstants,
    LiftedCharacter,
    ModPCharacter,
    character_degrees,
    character_table,
    class_constants,
    codegree_set,
    dixon_prime,
    lift_character,
    mod_p_characters,
)
