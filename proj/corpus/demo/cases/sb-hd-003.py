import requests
import hashlib
import time

BASE = 'https://api.switch-bot.com/v1.1'


def make_auth_headers(token, secret):
    t = str(int(time.time() * 1000))
    sign = hashlib.sha256((token + t).encode()).hexdigest()
    return {'Authorization': token, 'sign': sign, 't': t}


def get_device_list(token, secret):
    headers = {**make_auth_headers(token, secret)}
    response = requests.get(f'{BASE}/devices', headers=headers)
    return response.json()
