﻿"""准哈密顿空间检验系统"""
