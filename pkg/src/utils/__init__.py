﻿"""工具模块：输出格式化、报告导出、箭图可视化"""
