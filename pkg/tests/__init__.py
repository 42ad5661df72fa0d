"""Test modules"""
