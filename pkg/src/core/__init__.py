﻿"""核心模块：李群与有限群、双旋子、准哈密顿空间、曲面箭图、覆叠与回路离散化"""
