﻿"""
检验套件包
每种构造对应一个套件，套件把运行配置中的检验名称映射到 src.core 中的检验函数
"""
