"""FrozenTime - Test Suite"""
