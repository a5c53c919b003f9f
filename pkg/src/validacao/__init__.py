# -*- coding: utf-8 -*-
"""Métricas, replicações, varreduras e oráculo analítico do EdcaSim"""
